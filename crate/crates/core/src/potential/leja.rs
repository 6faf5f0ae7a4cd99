use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{CompactSetModel, WeightedPointSet};
use crate::error::{Error, Result};
use crate::poly::lexicographic;

pub const DEFAULT_BOUNDARY_RESOLUTION: usize = 4096;
const SUP_SAMPLES: usize = 8192;
const TIE: f64 = 1e-12;

fn beats(score: f64, z: Complex64, best: f64, best_z: Complex64) -> bool {
    let slack = TIE * best.abs().max(1.0);
    score > best + slack || (score >= best - slack && lexicographic(&z, &best_z).is_lt())
}

/// Greedy choice from `candidates`: the point farthest from their centroid,
/// then repeatedly the point maximizing the sum of log distances to those
/// already chosen. Near-ties go to the lexicographically smallest point.
fn greedy(candidates: &[Complex64], n: usize) -> Result<Vec<usize>> {
    let centroid = candidates.iter().sum::<Complex64>() / candidates.len() as f64;
    let mut first = 0;
    for (i, &c) in candidates.iter().enumerate() {
        let d = (c - centroid).norm();
        let best = (candidates[first] - centroid).norm();
        if beats(d, c, best, candidates[first]) {
            first = i;
        }
    }
    let mut chosen = vec![first];
    let mut score: Vec<f64> = candidates.iter().map(|&c| (c - candidates[first]).norm().ln()).collect();
    while chosen.len() < n {
        let mut best: Option<usize> = None;
        for (i, &s) in score.iter().enumerate() {
            if s == f64::NEG_INFINITY {
                continue;
            }
            match best {
                Some(b) if !beats(s, candidates[i], score[b], candidates[b]) => {}
                _ => best = Some(i),
            }
        }
        let Some(b) = best else {
            return Err(Error::DegenerateSet(format!(
                "only {} distinct points available, {n} requested",
                chosen.len()
            )));
        };
        chosen.push(b);
        let pick = candidates[b];
        score.par_iter_mut().zip(candidates).for_each(|(s, &c)| *s += (c - pick).norm().ln());
    }
    Ok(chosen)
}

/// Leja points of `K` chosen among `boundary_resolution` boundary samples,
/// with uniform weights.
pub fn leja_points(k: &CompactSetModel, n: usize, boundary_resolution: usize) -> Result<WeightedPointSet> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 Leja points, got {n}")));
    }
    let candidates = k.boundary_points(boundary_resolution)?;
    let chosen = greedy(&candidates, n)?;
    WeightedPointSet::uniform(chosen.into_iter().map(|i| candidates[i]).collect())
}

/// Leja points improved by local exchange: each point is replaced by the
/// boundary sample that most increases `∏|w_j − w_k|`, sweeping until no
/// exchange helps or `max_sweeps` is reached.
pub fn fekete_refine(
    k: &CompactSetModel,
    n: usize,
    boundary_resolution: usize,
    max_sweeps: usize,
) -> Result<WeightedPointSet> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 points, got {n}")));
    }
    let candidates = k.boundary_points(boundary_resolution)?;
    let mut chosen = greedy(&candidates, n)?;
    for _ in 0..max_sweeps {
        let mut improved = false;
        for i in 0..n {
            let others: Vec<Complex64> = chosen
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &c)| candidates[c])
                .collect();
            let value = |z: Complex64| others.iter().map(|&w| (z - w).norm().ln()).sum::<f64>();
            let current = value(candidates[chosen[i]]);
            let scores: Vec<f64> = candidates.par_iter().map(|&c| value(c)).collect();
            let mut best = chosen[i];
            for (c, &s) in scores.iter().enumerate() {
                if s > scores[best] {
                    best = c;
                }
            }
            if scores[best] > current + TIE * current.abs().max(1.0) {
                chosen[i] = best;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    WeightedPointSet::uniform(chosen.into_iter().map(|i| candidates[i]).collect())
}

/// `(∏_{j<k} |w_j − w_k|)^{2/(n(n−1))}`, accumulated in logarithms.
/// Coincident points give 0.
pub fn transfinite_diameter(points: &[Complex64]) -> Result<f64> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InvalidArgument("transfinite diameter needs at least 2 points".into()));
    }
    let mut sum = 0.0;
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            sum += (p - q).norm().ln();
        }
    }
    Ok((2.0 * sum / (n * (n - 1)) as f64).exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CapacityEstimate {
    /// Transfinite diameter of the Leja points.
    pub transfinite: f64,
    /// `‖p‖_K^{1/n}` for the Leja polynomial `p`, sup over boundary samples.
    pub chebyshev: f64,
    /// The smaller of the two; both overestimate the capacity.
    pub estimate: f64,
}

/// Capacity from `n` Leja points, see [`capacity_estimate_with`].
pub fn capacity_estimate(k: &CompactSetModel, n: usize) -> Result<f64> {
    Ok(capacity_estimate_with(k, n, DEFAULT_BOUNDARY_RESOLUTION)?.estimate)
}

/// Two upper estimates of `c(K)` from the Leja points `w_1..w_n`: their
/// transfinite diameter, and `‖∏(z − w_j)‖_K^{1/n}` (every monic polynomial
/// of degree `n` has sup norm at least `c(K)^n` on `K`). The second
/// converges markedly faster on sets with endpoints or several pieces.
pub fn capacity_estimate_with(k: &CompactSetModel, n: usize, boundary_resolution: usize) -> Result<CapacityEstimate> {
    if n < 8 {
        return Err(Error::InvalidArgument(format!("capacity estimate needs n ≥ 8, got {n}")));
    }
    let leja = leja_points(k, n, boundary_resolution)?;
    let transfinite = transfinite_diameter(leja.points())?;
    let samples = k.boundary_points(SUP_SAMPLES)?;
    let max_log = samples
        .par_iter()
        .map(|&z| leja.points().iter().map(|&w| (z - w).norm().ln()).sum::<f64>())
        .reduce(|| f64::NEG_INFINITY, f64::max);
    let chebyshev = (max_log / n as f64).exp();
    Ok(CapacityEstimate {
        transfinite,
        chebyshev,
        estimate: transfinite.min(chebyshev),
    })
}
