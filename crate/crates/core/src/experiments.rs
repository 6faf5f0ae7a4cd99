//! Experiment drivers: random lemniscates, Fekete-point polynomials, the
//! cluster construction, capacity sweeps and the EHP census.
//!
//! Trial `i` draws from its own ChaCha8 stream `(seed, i)`, and results are
//! collected in trial order, so output does not depend on thread count.

use std::fs;
use std::path::PathBuf;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{ehp_polynomial, scaled_ehp};
use crate::error::{Error, Result};
use crate::lemniscate::{
    certified_isolation_radius, count_by_critical_values, count_components, grid_components,
    isolated_component_test, raster_within_balls, render_svg, ComponentReport, CountMethod,
};
use crate::poly::MonicPolynomial;
use crate::potential::{
    capacity_estimate, capacity_estimate_with, equilibrium_sampler, leja_points, sample_with, CompactSetModel,
    SamplerKind, DEFAULT_BOUNDARY_RESOLUTION,
};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;
/// Starting grid resolution for grid counts.
pub const DEFAULT_RESOLUTION: usize = 1024;
/// Witness candidates tried before giving up on grid verification.
const WITNESS_ATTEMPTS: usize = 10;
const SVG_RESOLUTION: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    MeanRatio,
    FeketeLemniscate,
    ClusterLowerBound,
    CapacitySweep,
    EhpCensus,
}

/// `n₁` zeros at `a`, the rest drawn from the configured set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterParams {
    pub a: Complex64,
    /// Defaults to `degree / 2`.
    #[serde(default)]
    pub n1: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub summary: Option<PathBuf>,
    #[serde(default)]
    pub svg: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(rename = "set", alias = "K", default = "CompactSetModel::unit_circle")]
    pub set: CompactSetModel,
    #[serde(default = "defaults::degree")]
    pub degree: usize,
    #[serde(default = "defaults::trials")]
    pub trials: usize,
    #[serde(default = "defaults::seed")]
    pub seed: u64,
    #[serde(default = "defaults::resolution")]
    pub resolution: usize,
    #[serde(default = "defaults::level")]
    pub level: f64,
    /// Compute per-trial isolated-zero fractions.
    #[serde(default = "defaults::isolation")]
    pub isolation: bool,
    #[serde(default)]
    pub cluster: Option<ClusterParams>,
    /// Leja point counts for `capacity_sweep`.
    #[serde(default)]
    pub sweep: Option<Vec<usize>>,
    #[serde(default)]
    pub n_min: Option<usize>,
    #[serde(default)]
    pub n_max: Option<usize>,
    #[serde(default)]
    pub outputs: OutputPaths,
}

mod defaults {
    pub fn degree() -> usize {
        64
    }
    pub fn trials() -> usize {
        1
    }
    pub fn seed() -> u64 {
        super::DEFAULT_SEED
    }
    pub fn resolution() -> usize {
        super::DEFAULT_RESOLUTION
    }
    pub fn level() -> f64 {
        1.0
    }
    pub fn isolation() -> bool {
        true
    }
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, set: CompactSetModel, degree: usize, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            kind,
            set,
            degree,
            trials,
            seed,
            resolution: DEFAULT_RESOLUTION,
            level: 1.0,
            isolation: true,
            cluster: None,
            sweep: None,
            n_min: None,
            n_max: None,
            outputs: OutputPaths::default(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        if self.degree < 2 {
            return bad(format!("degree must be at least 2, got {}", self.degree));
        }
        if !(self.level.is_finite() && self.level > 0.0) {
            return bad(format!("level must be positive, got {}", self.level));
        }
        self.set.validate()?;
        match self.kind {
            ExperimentKind::ClusterLowerBound => {
                let Some(c) = &self.cluster else {
                    return bad("cluster_lower_bound needs a \"cluster\" block".into());
                };
                if c.n1.is_some_and(|n1| n1 > self.degree) {
                    return bad("cluster n1 exceeds the degree".into());
                }
            }
            ExperimentKind::EhpCensus => {
                let (lo, hi) = self.census_range();
                if !(3 <= lo && lo <= hi && hi <= 100) {
                    return bad(format!("census range must satisfy 3 ≤ n_min ≤ n_max ≤ 100, got {lo}..{hi}"));
                }
            }
            ExperimentKind::CapacitySweep => {
                if self.sweep_sizes().iter().any(|&n| n < 8) {
                    return bad("capacity sweep sizes must be at least 8".into());
                }
            }
            ExperimentKind::MeanRatio | ExperimentKind::FeketeLemniscate => {}
        }
        Ok(())
    }

    fn census_range(&self) -> (usize, usize) {
        (self.n_min.unwrap_or(3), self.n_max.unwrap_or(100))
    }

    fn sweep_sizes(&self) -> Vec<usize> {
        self.sweep.clone().unwrap_or_else(|| vec![8, 16, 32, 64])
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `∏ (z − X_j)` with `X_j` i.i.d. from the equilibrium measure of `K`,
/// drawn from stream `trial` of `seed`.
pub fn random_polynomial(k: &CompactSetModel, n: usize, seed: u64, trial: u64) -> Result<MonicPolynomial> {
    let mut rng = trial_rng(seed, trial);
    MonicPolynomial::from_zeros(sample_with(k, n, &mut rng)?)
}

fn cluster_polynomial(k: &CompactSetModel, n: usize, params: &ClusterParams, seed: u64, trial: u64) -> Result<MonicPolynomial> {
    let n1 = params.n1.unwrap_or(n / 2);
    let mut zeros = vec![params.a; n1];
    if n > n1 {
        let mut rng = trial_rng(seed, trial);
        zeros.extend(sample_with(k, n - n1, &mut rng)?);
    }
    MonicPolynomial::from_zeros(zeros)
}

/// Critical-value count, replaced by the grid count when ambiguous. The
/// `ambiguous` flag is kept so summaries can exclude such trials.
pub fn count_with_fallback(p: &MonicPolynomial, resolution: usize, level: f64) -> Result<ComponentReport> {
    let mut report = count_by_critical_values(p, level)?;
    if report.ambiguous {
        if let Ok(grid) = grid_components(p, resolution, level) {
            report.count = grid.count();
            report.method = CountMethod::Grid;
            report.per_zero_isolated = Some(grid.per_zero_isolated(p.degree()));
        }
    }
    Ok(report)
}

/// One random lemniscate from `K` (stream 0 of `seed`) at level 1.
pub fn random_lemniscate_trial(k: &CompactSetModel, n: usize, seed: u64) -> Result<ComponentReport> {
    count_with_fallback(&random_polynomial(k, n, seed, 0)?, DEFAULT_RESOLUTION, 1.0)
}

/// Fraction of zeros with a certified isolation radius: a lower bound on
/// the fraction of zeros alone in their component.
pub fn isolated_fraction(p: &MonicPolynomial, level: f64) -> f64 {
    let n = p.degree();
    let hits = (0..n)
        .into_par_iter()
        .filter(|&j| certified_isolation_radius(p, j, level).is_some())
        .count();
    hits as f64 / n as f64
}

pub fn min_pairwise_distance(points: &[Complex64]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    let mut d = f64::INFINITY;
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            d = d.min((p - q).norm());
        }
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub degree: usize,
    pub count: usize,
    pub ratio: f64,
    pub method: CountMethod,
    pub margin: f64,
    pub ambiguous: bool,
    pub isolated_fraction: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialSummary {
    pub degree: usize,
    pub trials: usize,
    pub seed: u64,
    pub sampler: SamplerKind,
    /// Trials entering the mean (unambiguous ones).
    pub counted_trials: usize,
    pub ambiguous_trials: usize,
    pub mean_ratio: f64,
    pub std_error: f64,
    /// Largest ratio whose count the grid reproduced.
    pub max_ratio: Option<f64>,
    pub witness_trial: Option<usize>,
    pub mean_isolated_fraction: Option<f64>,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
    #[serde(skip)]
    pub witness: Option<MonicPolynomial>,
}

fn run_trials<F>(cfg: &ExperimentConfig, make: F) -> Result<TrialSummary>
where
    F: Fn(u64) -> Result<MonicPolynomial> + Sync,
{
    let n = cfg.degree;
    let records: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let p = make(t as u64)?;
            let r = count_with_fallback(&p, cfg.resolution, cfg.level)?;
            Ok(TrialRecord {
                trial: t,
                degree: n,
                count: r.count,
                ratio: r.ratio(),
                method: r.method,
                margin: r.margin,
                ambiguous: r.ambiguous,
                isolated_fraction: cfg.isolation.then(|| isolated_fraction(&p, cfg.level)),
            })
        })
        .collect::<Result<_>>()?;

    let counted: Vec<&TrialRecord> = records.iter().filter(|r| !r.ambiguous).collect();
    let k = counted.len();
    let mean_ratio = counted.iter().map(|r| r.ratio).sum::<f64>() / k as f64;
    let std_error = if k > 1 {
        let var = counted.iter().map(|r| (r.ratio - mean_ratio).powi(2)).sum::<f64>() / (k - 1) as f64;
        (var / k as f64).sqrt()
    } else {
        0.0
    };
    let mean_isolated_fraction = cfg
        .isolation
        .then(|| records.iter().filter_map(|r| r.isolated_fraction).sum::<f64>() / records.len() as f64);

    // Best ratios first, earliest trial on ties; the first whose count the
    // grid reproduces is the witness.
    let mut order: Vec<&TrialRecord> = counted.clone();
    order.sort_by(|a, b| b.ratio.total_cmp(&a.ratio).then(a.trial.cmp(&b.trial)));
    let mut witness = None;
    for r in order.into_iter().take(WITNESS_ATTEMPTS) {
        let p = make(r.trial as u64)?;
        if let Ok(grid) = grid_components(&p, cfg.resolution, cfg.level) {
            if grid.count() == r.count {
                witness = Some((r.ratio, r.trial, p));
                break;
            }
        }
    }
    Ok(TrialSummary {
        degree: n,
        trials: cfg.trials,
        seed: cfg.seed,
        sampler: equilibrium_sampler(&cfg.set),
        counted_trials: k,
        ambiguous_trials: records.len() - k,
        mean_ratio,
        std_error,
        max_ratio: witness.as_ref().map(|w| w.0),
        witness_trial: witness.as_ref().map(|w| w.1),
        mean_isolated_fraction,
        records,
        witness: witness.map(|w| w.2),
    })
}

/// Mean of `C_n/n` over random lemniscates from `K`, its standard error, and
/// a grid-verified maximum.
pub fn estimate_mean_component_ratio(cfg: &ExperimentConfig) -> Result<TrialSummary> {
    cfg.validate()?;
    run_trials(cfg, |t| random_polynomial(&cfg.set, cfg.degree, cfg.seed, t))
}

/// As [`estimate_mean_component_ratio`] for `(z − a)^{n₁} ∏ (z − X_j)`.
pub fn cluster_lower_bound(cfg: &ExperimentConfig) -> Result<TrialSummary> {
    cfg.validate()?;
    let params = cfg.cluster.as_ref().expect("validated");
    run_trials(cfg, |t| cluster_polynomial(&cfg.set, cfg.degree, params, cfg.seed, t))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeketeReport {
    pub degree: usize,
    /// Known capacity when available, else the Leja estimate.
    pub capacity: f64,
    pub report: ComponentReport,
    pub min_log_derivative: f64,
    /// `(n − 1) log c(K)`.
    pub log_derivative_bound: f64,
    pub derivative_bound_holds: bool,
    pub min_spacing: f64,
    /// `1/n²`.
    pub spacing_bound: f64,
    /// Per zero: [`isolated_component_test`] at half the distance to its
    /// nearest neighbour.
    pub isolated: Vec<bool>,
    pub all_isolated: bool,
    #[serde(skip)]
    pub polynomial: MonicPolynomial,
}

/// Polynomial with zeros at `n` Leja points of `K`: component count by both
/// methods, `|p′(z_j)|` against `c(K)^{n−1}`, spacing against `1/n²`.
pub fn fekete_lemniscate_experiment(k: &CompactSetModel, n: usize) -> Result<FeketeReport> {
    fekete_lemniscate_experiment_with(k, n, DEFAULT_RESOLUTION, 1.0)
}

pub fn fekete_lemniscate_experiment_with(
    k: &CompactSetModel,
    n: usize,
    resolution: usize,
    level: f64,
) -> Result<FeketeReport> {
    let points = leja_points(k, n, DEFAULT_BOUNDARY_RESOLUTION)?;
    let p = MonicPolynomial::from_zeros(points.points().to_vec())?;
    let report = count_components(&p, resolution, level)?;
    let capacity = match k.known_capacity() {
        Some(c) => c,
        None => capacity_estimate(k, n.max(8))?,
    };
    let log_derivative_bound = (n - 1) as f64 * capacity.ln();
    let log_derivs: Vec<f64> = (0..n).map(|j| p.log_abs_derivative_at_zero(j)).collect();
    let min_log_derivative = log_derivs.iter().copied().fold(f64::INFINITY, f64::min);
    let slack = 1e-9 * log_derivative_bound.abs().max(1.0);
    let zeros = p.zeros();
    let isolated: Vec<bool> = (0..n)
        .into_par_iter()
        .map(|j| {
            let nearest = zeros
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, &z)| (z - zeros[j]).norm())
                .fold(f64::INFINITY, f64::min);
            nearest > 0.0 && isolated_component_test(&p, j, 0.5 * nearest).unwrap_or(false)
        })
        .collect();
    Ok(FeketeReport {
        degree: n,
        capacity,
        report,
        min_log_derivative,
        log_derivative_bound,
        derivative_bound_holds: min_log_derivative >= log_derivative_bound - slack,
        min_spacing: min_pairwise_distance(zeros)?,
        spacing_bound: 1.0 / (n * n) as f64,
        all_isolated: isolated.iter().all(|&b| b),
        isolated,
        polynomial: p,
    })
}

/// Whether every raster cell of `Λ_p` lies within `e^{−n/10}` (plus half a
/// cell diagonal) of a zero. A spot check of the small-lemniscate regime for
/// `c(K) > 1`, not a proof.
pub fn klr_spot_check(p: &MonicPolynomial, resolution: usize) -> Result<bool> {
    let radius = (-(p.degree() as f64) / 10.0).exp();
    raster_within_balls(p, resolution, 1.0, radius)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EhpRow {
    pub n: usize,
    pub count: usize,
    pub ambiguous: bool,
    pub margin: f64,
    pub c_n: f64,
    pub delta_n: f64,
    pub scaled_count: usize,
    pub scaled_max_modulus: f64,
}

impl EhpRow {
    /// `count = n − 1` (when unambiguous), `c_n ∈ (1, 32]`, `δ_n ∈ (0, 1)`,
    /// and the scaled polynomial has zeros inside the unit disc and `n − 1`
    /// components.
    pub fn holds(&self) -> bool {
        (self.ambiguous || self.count == self.n - 1)
            && self.c_n > 1.0
            && self.c_n <= 32.0
            && self.delta_n > 0.0
            && self.delta_n < 1.0
            && self.scaled_max_modulus < 1.0
            && self.scaled_count == self.n - 1
    }
}

pub fn ehp_census(n_min: usize, n_max: usize) -> Result<Vec<EhpRow>> {
    if !(3 <= n_min && n_min <= n_max && n_max <= 100) {
        return Err(Error::InvalidArgument(format!(
            "census range must satisfy 3 ≤ n_min ≤ n_max ≤ 100, got {n_min}..{n_max}"
        )));
    }
    (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let e = ehp_polynomial(n)?;
            let report = count_by_critical_values(&e, 1.0)?;
            let scaled = scaled_ehp(n)?;
            let scaled_report = count_by_critical_values(&scaled.polynomial, 1.0)?;
            Ok(EhpRow {
                n,
                count: report.count,
                ambiguous: report.ambiguous,
                margin: report.margin,
                c_n: scaled.c_n,
                delta_n: scaled.delta_n,
                scaled_count: scaled_report.count,
                scaled_max_modulus: scaled.polynomial.zeros().iter().map(|z| z.norm()).fold(0.0, f64::max),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityRow {
    pub n: usize,
    pub transfinite: f64,
    pub chebyshev: f64,
    pub estimate: f64,
    pub known: Option<f64>,
}

pub fn capacity_sweep(k: &CompactSetModel, sizes: &[usize]) -> Result<Vec<CapacityRow>> {
    sizes
        .iter()
        .map(|&n| {
            let e = capacity_estimate_with(k, n, DEFAULT_BOUNDARY_RESOLUTION)?;
            Ok(CapacityRow {
                n,
                transfinite: e.transfinite,
                chebyshev: e.chebyshev,
                estimate: e.estimate,
                known: k.known_capacity(),
            })
        })
        .collect()
}

/// Rendered outputs of one experiment; [`run_experiment`] also writes them
/// to the configured paths.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub summary: serde_json::Value,
    pub csv: String,
    pub svg: Option<String>,
}

/// Serializes rows with a header taken from the field names.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[derive(Serialize)]
struct ZeroRow {
    j: usize,
    re: f64,
    im: f64,
    log_derivative: f64,
    isolated: bool,
}

/// Runs the configured experiment and writes the trial CSV, summary JSON and
/// optional SVG. Identical configurations give byte-identical files.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let with_config = |result: serde_json::Value| {
        serde_json::json!({
            "kind": cfg.kind,
            "config": cfg,
            "result": result,
        })
    };
    let output = match cfg.kind {
        ExperimentKind::MeanRatio | ExperimentKind::ClusterLowerBound => {
            let summary = if cfg.kind == ExperimentKind::MeanRatio {
                estimate_mean_component_ratio(cfg)?
            } else {
                cluster_lower_bound(cfg)?
            };
            let svg = match &summary.witness {
                Some(p) if cfg.outputs.svg.is_some() => Some(render_svg(p, cfg.level, SVG_RESOLUTION)?),
                _ => None,
            };
            ExperimentOutput {
                summary: with_config(serde_json::to_value(&summary)?),
                csv: to_csv(&summary.records)?,
                svg,
            }
        }
        ExperimentKind::FeketeLemniscate => {
            let report = fekete_lemniscate_experiment_with(&cfg.set, cfg.degree, cfg.resolution, cfg.level)?;
            let p = &report.polynomial;
            let rows: Vec<ZeroRow> = p
                .zeros()
                .iter()
                .enumerate()
                .map(|(j, z)| ZeroRow {
                    j,
                    re: z.re,
                    im: z.im,
                    log_derivative: p.log_abs_derivative_at_zero(j),
                    isolated: report.isolated[j],
                })
                .collect();
            let svg = match cfg.outputs.svg {
                Some(_) => Some(render_svg(p, cfg.level, SVG_RESOLUTION)?),
                None => None,
            };
            ExperimentOutput {
                summary: with_config(serde_json::to_value(&report)?),
                csv: to_csv(&rows)?,
                svg,
            }
        }
        ExperimentKind::CapacitySweep => {
            let rows = capacity_sweep(&cfg.set, &cfg.sweep_sizes())?;
            ExperimentOutput {
                summary: with_config(serde_json::to_value(&rows)?),
                csv: to_csv(&rows)?,
                svg: None,
            }
        }
        ExperimentKind::EhpCensus => {
            let (lo, hi) = cfg.census_range();
            let rows = ehp_census(lo, hi)?;
            let violations: Vec<usize> = rows.iter().filter(|r| !r.holds()).map(|r| r.n).collect();
            ExperimentOutput {
                summary: with_config(serde_json::json!({ "rows": rows.len(), "violations": violations })),
                csv: to_csv(&rows)?,
                svg: None,
            }
        }
    };
    if let Some(path) = &cfg.outputs.csv {
        fs::write(path, &output.csv)?;
    }
    if let Some(path) = &cfg.outputs.summary {
        fs::write(path, serde_json::to_string_pretty(&output.summary)? + "\n")?;
    }
    if let (Some(path), Some(svg)) = (&cfg.outputs.svg, &output.svg) {
        fs::write(path, svg)?;
    }
    Ok(output)
}
