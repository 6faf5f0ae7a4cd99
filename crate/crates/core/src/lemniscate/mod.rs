//! Connected components of `Λ = {z : |p(z)| < level}`.
//!
//! Two independent counts are offered. [`count_by_critical_values`] uses
//! `count = 1 + #{critical points β (with multiplicity) : |p(β)| ≥ level}`.
//! [`count_by_grid`] rasterizes the sublevel set and flood fills it. They
//! disagree only when a critical value sits at the level itself, where two
//! components touch; such reports are flagged `ambiguous`.
//!
//! Counting with multiplicity is forced by `z^n − 1`: its single critical
//! point `0` has multiplicity `n − 1`, critical value exactly `1`, and the
//! lemniscate has `n` components. A critical value within the ambiguity
//! threshold of the level is therefore counted as reaching it.

mod grid;
mod svg;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::MonicPolynomial;
use crate::rootfind::{critical_points, CriticalSet};

pub use grid::{
    certified_isolation_radius, count_by_grid, grid_components, raster_within_balls, GridComponents, MAX_GRID_RESOLUTION,
    MIN_GRID_RESOLUTION,
};
pub use svg::render_svg;

/// Relative distance of a critical value from the level below which the
/// count is reported as ambiguous.
pub const MARGIN_THRESHOLD: f64 = 1e-6;

/// Default constant in the Bernstein diameter bound used by [`certify_isolated`].
pub const DEFAULT_BERNSTEIN_CONSTANT: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    CriticalValue,
    Grid,
    BothAgree,
}

impl CountMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            CountMethod::CriticalValue => "critical_value",
            CountMethod::Grid => "grid",
            CountMethod::BothAgree => "both_agree",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentReport {
    pub degree: usize,
    pub count: usize,
    pub method: CountMethod,
    /// `min |log|p(β)| − log(level)|` over critical points; `inf` when every
    /// critical value is zero, `NaN` for grid-only reports.
    pub margin: f64,
    pub ambiguous: bool,
    pub per_zero_isolated: Option<Vec<bool>>,
}

impl ComponentReport {
    pub const CSV_HEADER: &'static str = "degree,method,count,margin,ambiguous";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:e},{}",
            self.degree,
            self.method.as_str(),
            self.count,
            self.margin,
            self.ambiguous
        )
    }

    pub fn ratio(&self) -> f64 {
        self.count as f64 / self.degree as f64
    }
}

fn check_level(level: f64) -> Result<()> {
    if level.is_finite() && level > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("level must be positive, got {level}")))
    }
}

/// Whether `log_value` is within the ambiguity threshold of `log_level`.
fn near_level(log_value: f64, log_level: f64) -> bool {
    ((log_value - log_level).exp() - 1.0).abs() < MARGIN_THRESHOLD
}

/// Component count from a precomputed critical set.
pub fn count_from_critical_set(degree: usize, critical: &CriticalSet, level: f64) -> ComponentReport {
    let log_level = level.ln();
    let mut count = 1;
    let mut margin = f64::INFINITY;
    let mut ambiguous = false;
    for e in &critical.entries {
        let gap = e.log_value - log_level;
        if gap.is_finite() {
            margin = margin.min(gap.abs());
        }
        let near = near_level(e.log_value, log_level);
        ambiguous |= near;
        if gap >= 0.0 || near {
            count += e.multiplicity;
        }
    }
    ComponentReport {
        degree,
        count: count.min(degree),
        method: CountMethod::CriticalValue,
        margin,
        ambiguous,
        per_zero_isolated: None,
    }
}

pub fn count_by_critical_values(p: &MonicPolynomial, level: f64) -> Result<ComponentReport> {
    check_level(level)?;
    if p.degree() == 1 {
        return Ok(ComponentReport {
            degree: 1,
            count: 1,
            method: CountMethod::CriticalValue,
            margin: f64::INFINITY,
            ambiguous: false,
            per_zero_isolated: None,
        });
    }
    let critical = critical_points(p)?;
    Ok(count_from_critical_set(p.degree(), &critical, level))
}

/// Runs both counts. Agreement gives [`CountMethod::BothAgree`]; an ambiguous
/// disagreement keeps the critical-value count; an unambiguous disagreement
/// is an error.
pub fn count_components(p: &MonicPolynomial, resolution: usize, level: f64) -> Result<ComponentReport> {
    let mut report = count_by_critical_values(p, level)?;
    let grid = grid_components(p, resolution, level)?;
    if grid.count() == report.count {
        report.method = CountMethod::BothAgree;
        report.per_zero_isolated = Some(grid.per_zero_isolated(p.degree()));
        Ok(report)
    } else if report.ambiguous {
        Ok(report)
    } else {
        Err(Error::Disagreement {
            critical: report.count,
            grid: grid.count(),
        })
    }
}

/// Sufficient condition for the component of `Λ_p` containing zero `j` to
/// contain no other zero: `|p′(z_j)| ≥ exp(n^α)`, spacing `≥ n^{−β}`, and the
/// Bernstein bound `diam ≤ C n² / |p′(z_j)|` on that component falls below
/// the spacing.
pub fn certify_isolated(p: &MonicPolynomial, j: usize, alpha: f64, beta: f64) -> Result<bool> {
    certify_isolated_with(p, j, alpha, beta, DEFAULT_BERNSTEIN_CONSTANT)
}

pub fn certify_isolated_with(p: &MonicPolynomial, j: usize, alpha: f64, beta: f64, bernstein: f64) -> Result<bool> {
    if !(alpha > 0.0 && beta > 0.0 && bernstein > 0.0) {
        return Err(Error::InvalidArgument("alpha, beta and the Bernstein constant must be positive".into()));
    }
    let n = p.degree();
    if j >= n {
        return Err(Error::InvalidArgument(format!("zero index {j} out of range for degree {n}")));
    }
    if n == 1 {
        return Ok(true);
    }
    let nf = n as f64;
    let log_deriv = p.log_abs_derivative_at_zero(j);
    let zj = p.zeros()[j];
    let spacing = p
        .zeros()
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != j)
        .map(|(_, &zk)| (zj - zk).norm())
        .fold(f64::INFINITY, f64::min);
    if spacing == 0.0 || log_deriv < nf.powf(alpha) || spacing < nf.powf(-beta) {
        return Ok(false);
    }
    let log_diameter_bound = bernstein.ln() + 2.0 * nf.ln() - log_deriv;
    Ok(log_diameter_bound < spacing.ln())
}

/// Whether `B(z_j, radius)` holds no other zero and `|p| ≥ 1` on its
/// boundary, sampled at `max(64n, 64)` equispaced points.
pub fn isolated_component_test(p: &MonicPolynomial, j: usize, radius: f64) -> Result<bool> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let n = p.degree();
    if j >= n {
        return Err(Error::InvalidArgument(format!("zero index {j} out of range for degree {n}")));
    }
    let zj = p.zeros()[j];
    let crowded = p
        .zeros()
        .iter()
        .enumerate()
        .any(|(k, &zk)| k != j && (zk - zj).norm() < radius);
    if crowded {
        return Ok(false);
    }
    let samples = (64 * n).max(64);
    let step = 2.0 * std::f64::consts::PI / samples as f64;
    Ok((0..samples).all(|s| p.log_abs_evaluate(zj + Complex64::from_polar(radius, s as f64 * step)) >= 0.0))
}
