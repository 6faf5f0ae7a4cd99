//! Logarithmic potential theory on finitely supported measures.
//!
//! Compact sets are modelled by [`CompactSetModel`]. Capacities are estimated
//! from Leja points, and equilibrium measures are sampled exactly where the
//! density is known.

mod leja;
mod model;
mod sample;

use std::io::{Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{is_finite, MonicPolynomial};

pub use leja::{
    capacity_estimate, capacity_estimate_with, fekete_refine, leja_points, transfinite_diameter, CapacityEstimate,
    DEFAULT_BOUNDARY_RESOLUTION,
};
pub use model::CompactSetModel;
pub(crate) use sample::sample_with;
pub use sample::{equilibrium_sample, equilibrium_sampler, SamplerKind, LEJA_RESAMPLE_POINTS};

const WEIGHT_TOLERANCE: f64 = 1e-12;

/// A finitely supported probability measure.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPointSet {
    points: Vec<Complex64>,
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct Row {
    re: f64,
    im: f64,
    weight: f64,
}

impl WeightedPointSet {
    pub fn new(points: Vec<Complex64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("a measure needs at least one point".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::InvalidArgument(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if !points.iter().all(|&z| is_finite(z)) {
            return Err(Error::NonFinite("points"));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidArgument("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        // Summation error grows with the number of terms.
        let tol = WEIGHT_TOLERANCE.max(4.0 * f64::EPSILON * weights.len() as f64);
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidArgument(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { points, weights })
    }

    /// Equal weights `1/n`.
    pub fn uniform(points: Vec<Complex64>) -> Result<Self> {
        let w = 1.0 / points.len().max(1) as f64;
        let weights = vec![w; points.len()];
        Self::new(points, weights)
    }

    /// The zero-counting measure `(1/n) Σ δ_{z_j}`.
    pub fn empirical(p: &MonicPolynomial) -> Self {
        Self::uniform(p.zeros().to_vec()).expect("a polynomial has finite zeros")
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn is_uniform(&self) -> bool {
        self.weights.iter().all(|&w| w == self.weights[0])
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for (z, &weight) in self.points.iter().zip(&self.weights) {
            w.serialize(Row {
                re: z.re,
                im: z.im,
                weight,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for row in csv::Reader::from_reader(reader).deserialize() {
            let row: Row = row?;
            points.push(Complex64::new(row.re, row.im));
            weights.push(row.weight);
        }
        Self::new(points, weights)
    }
}

/// `U_μ(z) = Σ w_i log|z − p_i|`. For equal weights the sum of logarithms is
/// formed first, in the same order as [`MonicPolynomial::log_abs_evaluate`],
/// so that `log_potential(empirical(p), z) == log_abs_evaluate(p, z) * (1/n)`.
pub fn log_potential(mu: &WeightedPointSet, z: Complex64) -> f64 {
    if mu.is_uniform() {
        let mut sum = 0.0;
        for &p in &mu.points {
            let d = (z - p).norm();
            if d == 0.0 {
                return f64::NEG_INFINITY;
            }
            sum += d.ln();
        }
        return sum * mu.weights[0];
    }
    let mut sum = 0.0;
    for (&p, &w) in mu.points.iter().zip(&mu.weights) {
        if w == 0.0 {
            continue;
        }
        let d = (z - p).norm();
        if d == 0.0 {
            return f64::NEG_INFINITY;
        }
        sum += w * d.ln();
    }
    sum
}

/// Off-diagonal energy `Σ_{i≠j} w_i w_j log|p_i − p_j| / Σ_{i≠j} w_i w_j`.
/// Coincident pairs make it `-inf`; a measure whose support is one point is
/// an error.
pub fn energy(mu: &WeightedPointSet) -> Result<f64> {
    let pts = &mu.points;
    let w = &mu.weights;
    let first = pts[0];
    if pts.iter().all(|&p| p == first) {
        return Err(Error::CoincidentPoints);
    }
    // Row sums are collected in order and added sequentially so the result
    // does not depend on the thread schedule.
    let rows: Vec<(f64, f64)> = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let mut s = 0.0;
            let mut mass = 0.0;
            for j in (i + 1)..pts.len() {
                let ww = w[i] * w[j];
                if ww == 0.0 {
                    continue;
                }
                s += ww * (pts[i] - pts[j]).norm().ln();
                mass += ww;
            }
            (s, mass)
        })
        .collect();
    let (sum, mass) = rows.iter().fold((0.0, 0.0), |(a, b), &(s, m)| (a + s, b + m));
    if mass == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    Ok(sum / mass)
}

/// `μ(B(center, r))` for the closed ball.
pub fn ball_mass(mu: &WeightedPointSet, center: Complex64, r: f64) -> Result<f64> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let mass: f64 = mu
        .points
        .iter()
        .zip(&mu.weights)
        .filter(|(p, _)| (**p - center).norm() <= r)
        .map(|(_, w)| w)
        .sum();
    Ok(mass.min(1.0))
}

/// Least-squares slope of `log y` against `log x`, skipping pairs with a
/// nonpositive entry.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let pairs: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pairs.len() < 2 {
        return Err(Error::InvalidArgument("slope fit needs two positive pairs".into()));
    }
    let k = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pairs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("slope fit needs distinct abscissae".into()));
    }
    Ok(sxy / sxx)
}
