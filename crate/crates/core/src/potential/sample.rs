use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{leja_points, CompactSetModel, WeightedPointSet, DEFAULT_BOUNDARY_RESOLUTION};
use crate::error::{Error, Result};
use crate::poly::CoefficientVector;
use crate::rootfind::solve_preimages;

/// Leja points used as the atoms of the fallback sampler.
pub const LEJA_RESAMPLE_POINTS: usize = 256;

/// How [`equilibrium_sample`] draws from a given set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerKind {
    /// Draws follow the equilibrium measure exactly.
    Exact,
    /// Draws are uniform over a fixed set of Leja points: an atomic
    /// approximation of the equilibrium measure.
    LejaResample,
}

/// Discs and circles carry `dθ/2π` on the circle, segments the arcsine law,
/// preimage sets the pullback (uniform over the preimages of a draw from
/// the image set's measure). Jordan curves and unions fall back to Leja
/// resampling.
pub fn equilibrium_sampler(k: &CompactSetModel) -> SamplerKind {
    match k {
        CompactSetModel::Disk { .. }
        | CompactSetModel::Circle { .. }
        | CompactSetModel::Segment { .. }
        | CompactSetModel::LemniscatePreimage { .. }
        | CompactSetModel::PeriodM { .. } => SamplerKind::Exact,
        CompactSetModel::JordanCurve { .. } | CompactSetModel::Union { .. } => SamplerKind::LejaResample,
    }
}

/// `count` i.i.d. draws from the equilibrium measure of `K` with uniform
/// weights; the stream is fixed by `seed`. Check [`equilibrium_sampler`] to
/// see whether the draws are exact.
pub fn equilibrium_sample(k: &CompactSetModel, count: usize, seed: u64) -> Result<WeightedPointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    WeightedPointSet::uniform(sample_with(k, count, &mut rng)?)
}

pub(crate) fn sample_with<R: Rng>(k: &CompactSetModel, count: usize, rng: &mut R) -> Result<Vec<Complex64>> {
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    k.validate()?;
    let pullback = |coefficients: &[Complex64], rng: &mut R, draw: &dyn Fn(&mut R) -> Complex64| {
        let q = CoefficientVector::new(coefficients.to_vec())?;
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let t = draw(rng);
            let pre = solve_preimages(&q, t)?.expanded();
            out.push(pre[rng.random_range(0..pre.len())]);
        }
        Ok::<_, Error>(out)
    };
    match k {
        CompactSetModel::Disk { center, radius } | CompactSetModel::Circle { center, radius } => Ok((0..count)
            .map(|_| center + Complex64::from_polar(*radius, TAU * rng.random::<f64>()))
            .collect()),
        CompactSetModel::Segment { a, b } => Ok((0..count)
            .map(|_| a + (b - a) * (0.5 * (1.0 - (PI * rng.random::<f64>()).cos())))
            .collect()),
        CompactSetModel::LemniscatePreimage { coefficients, radius } => {
            let r = *radius;
            pullback(coefficients, rng, &|rng: &mut R| Complex64::from_polar(r, TAU * rng.random::<f64>()))
        }
        CompactSetModel::PeriodM { coefficients } => pullback(coefficients, rng, &|rng: &mut R| {
            Complex64::new(2.0 * (PI * rng.random::<f64>()).cos(), 0.0)
        }),
        CompactSetModel::JordanCurve { .. } | CompactSetModel::Union { .. } => {
            let atoms = leja_points(k, LEJA_RESAMPLE_POINTS, DEFAULT_BOUNDARY_RESOLUTION)?;
            let atoms = atoms.points();
            Ok((0..count).map(|_| atoms[rng.random_range(0..atoms.len())]).collect())
        }
    }
}
