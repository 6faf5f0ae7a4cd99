//! `lemniscates`: construct polynomials, count lemniscate components,
//! estimate capacities and run experiments from the shell.
//!
//! Exit codes: 0 on success, 1 on domain errors (bad input files, solver
//! failures, invalid parameters), 2 on usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lemniscates::constructions::{self, Sign};
use lemniscates::experiments::{self, ExperimentConfig, DEFAULT_RESOLUTION, DEFAULT_SEED};
use lemniscates::lemniscate::{self, ComponentReport};
use lemniscates::potential::{self, CompactSetModel, DEFAULT_BOUNDARY_RESOLUTION};
use lemniscates::{CoefficientVector, Complex64, MonicPolynomial};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "lemniscates", version, about = "Polynomial lemniscates with zeros on a compact set")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a polynomial and write its zeros as JSON.
    Construct(ConstructArgs),
    /// Count the components of {|p| < level}.
    Components(ComponentsArgs),
    /// Estimate the logarithmic capacity of a compact set.
    Capacity(CapacityArgs),
    /// Polynomial with zeros at Leja points of a set: counts, derivative and isolation checks.
    Fekete(FeketeArgs),
    /// Sample the equilibrium measure of a set.
    Sample(SampleArgs),
    /// Run an experiment described by a JSON config.
    Experiment(ExperimentArgs),
    /// Draw the lemniscate and the zeros as SVG.
    Plot(PlotArgs),
    /// Component counts of the EHP polynomials over a range of degrees.
    EhpCensus(CensusArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    RootsOfUnity,
    Chebyshev,
    Ehp,
    EhpScaled,
    PeriodM,
    LemniscatePower,
    Faber,
    Cluster,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Plus => Sign::PlusOne,
            SignArg::Minus => Sign::MinusOne,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Critical,
    Grid,
    Both,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    kind: Construction,
    /// Degree (for `faber`, the index of F_n; for `period-m` and
    /// `lemniscate-power`, the exponent).
    #[arg(long)]
    n: usize,
    /// `z^n − 1` (minus) or `z^n + 1` (plus); also the sign in `Q^n ± 1`.
    #[arg(long, value_enum, default_value = "minus")]
    sign: SignArg,
    /// Half-width of the Chebyshev interval.
    #[arg(long, default_value_t = 2.0)]
    half_width: f64,
    /// Coefficients of the generating polynomial, ascending, as a JSON array
    /// of numbers or [re, im] pairs.
    #[arg(long)]
    q: Option<String>,
    /// Laurent coefficients a₀, a₁, … of ψ(w) = w + a₀ + a₁/w + …
    #[arg(long, default_value = "[]")]
    psi: String,
    /// Cluster point as [re, im].
    #[arg(long)]
    a: Option<String>,
    /// Set for the random part of `cluster`, as JSON or a path.
    #[arg(long)]
    set: Option<String>,
    /// Zeros placed at `a` by `cluster`; defaults to n/2.
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ComponentsArgs {
    /// Polynomial file `{"zeros": [[re, im], ...]}`.
    #[arg(long)]
    poly: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    level: f64,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: usize,
    #[arg(long, value_enum, default_value = "both")]
    method: Method,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CapacityArgs {
    /// Compact set as JSON or a path to a JSON file.
    #[arg(long)]
    set: String,
    /// Number of Leja points.
    #[arg(long, default_value_t = 64)]
    n: usize,
    /// Boundary discretization size.
    #[arg(long, default_value_t = DEFAULT_BOUNDARY_RESOLUTION)]
    resolution: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FeketeArgs {
    #[arg(long)]
    set: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    resolution: usize,
    #[arg(long, default_value_t = 1.0)]
    level: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    set: String,
    /// Number of sample points.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the trial count in the config.
    #[arg(long)]
    trials: Option<usize>,
    /// Overrides the degree in the config.
    #[arg(long)]
    degree: Option<usize>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    poly: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    level: f64,
    #[arg(long, default_value_t = 512)]
    resolution: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long, default_value_t = 3)]
    n_min: usize,
    #[arg(long, default_value_t = 100)]
    n_max: usize,
    #[command(flatten)]
    output: Output,
}

enum Failure {
    Usage(String),
    Domain(lemniscates::Error),
    File(PathBuf, std::io::Error),
}

impl From<lemniscates::Error> for Failure {
    fn from(e: lemniscates::Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Domain(e.into())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::File(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Outcome<()> {
    match command {
        Command::Construct(a) => construct(a),
        Command::Components(a) => components(a),
        Command::Capacity(a) => capacity(a),
        Command::Fekete(a) => fekete(a),
        Command::Sample(a) => sample(a),
        Command::Experiment(a) => experiment(a),
        Command::Plot(a) => plot(a),
        Command::EhpCensus(a) => census(a),
    }
}

/// Checks the requested format against those a subcommand offers; the first
/// is the default.
fn format(output: &Output, allowed: &[Format]) -> Outcome<Format> {
    match output.format {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(Failure::Usage(format!(
            "--format {} is not available here",
            f.to_possible_value().expect("no skipped variants").get_name()
        ))),
    }
}

fn emit(output: &Output, text: &str) -> Outcome<()> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::File(path.clone(), e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &impl serde::Serialize) -> Outcome<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::File(path.to_path_buf(), e))
}

fn read_poly(path: &Path) -> Outcome<MonicPolynomial> {
    Ok(MonicPolynomial::from_json(&read(path)?)?)
}

/// Inline JSON when the argument starts with `{`, otherwise a path.
fn read_set(arg: &str) -> Outcome<CompactSetModel> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        read(Path::new(arg))?
    };
    Ok(CompactSetModel::from_json(&text)?)
}

fn parse_complex(v: &Value) -> Option<Complex64> {
    match v {
        Value::Number(x) => Some(Complex64::new(x.as_f64()?, 0.0)),
        Value::Array(p) if p.len() == 2 => Some(Complex64::new(p[0].as_f64()?, p[1].as_f64()?)),
        _ => None,
    }
}

fn parse_complex_list(flag: &str, text: &str) -> Outcome<Vec<Complex64>> {
    let bad = || Failure::Usage(format!("--{flag} must be a JSON array of numbers or [re, im] pairs"));
    let v: Value = serde_json::from_str(text).map_err(|_| bad())?;
    let Value::Array(items) = v else {
        return Err(bad());
    };
    items.iter().map(|x| parse_complex(x).ok_or_else(bad)).collect()
}

fn require<'a>(value: &'a Option<String>, flag: &str, kind: &str) -> Outcome<&'a str> {
    value
        .as_deref()
        .ok_or_else(|| Failure::Usage(format!("`construct {kind}` needs --{flag}")))
}

fn construct(a: ConstructArgs) -> Outcome<()> {
    format(&a.output, &[Format::Json])?;
    let p = match a.kind {
        Construction::RootsOfUnity => constructions::roots_of_unity_poly(a.n, a.sign.into())?,
        Construction::Chebyshev => constructions::chebyshev_monic(a.n, a.half_width)?,
        Construction::Ehp => constructions::ehp_polynomial(a.n)?,
        Construction::EhpScaled => constructions::scaled_ehp(a.n)?.polynomial,
        Construction::PeriodM => {
            let q = CoefficientVector::new(parse_complex_list("q", require(&a.q, "q", "period-m")?)?)?;
            constructions::composed_period_m(&q, a.n)?
        }
        Construction::LemniscatePower => {
            let q = CoefficientVector::new(parse_complex_list("q", require(&a.q, "q", "lemniscate-power")?)?)?;
            constructions::lemniscate_power(&q, a.n, a.sign.into())?
        }
        Construction::Faber => {
            let psi = parse_complex_list("psi", &a.psi)?;
            let faber = constructions::faber_polynomials(&psi, a.n)?;
            MonicPolynomial::from_zeros(faber.zeros(a.n)?)?
        }
        Construction::Cluster => {
            let point: Value = serde_json::from_str(require(&a.a, "a", "cluster")?)
                .map_err(|_| Failure::Usage("--a must be [re, im]".into()))?;
            let point = parse_complex(&point).ok_or_else(|| Failure::Usage("--a must be [re, im]".into()))?;
            let arc = read_set(require(&a.set, "set", "cluster")?)?;
            let n1 = a.n1.unwrap_or(a.n / 2);
            if n1 > a.n {
                return Err(Failure::Usage(format!("--n1 {n1} exceeds --n {}", a.n)));
            }
            constructions::cluster_construction(point, &arc, n1, a.n - n1, a.seed)?
        }
    };
    emit(&a.output, &(p.to_json() + "\n"))
}

fn components(a: ComponentsArgs) -> Outcome<()> {
    let fmt = format(&a.output, &[Format::Json, Format::Csv])?;
    let p = read_poly(&a.poly)?;
    let report: ComponentReport = match a.method {
        Method::Critical => lemniscate::count_by_critical_values(&p, a.level)?,
        Method::Grid => lemniscate::count_by_grid(&p, a.resolution, a.level)?,
        Method::Both => lemniscate::count_components(&p, a.resolution, a.level)?,
    };
    let text = match fmt {
        Format::Csv => format!("{}\n{}\n", ComponentReport::CSV_HEADER, report.csv_row()),
        _ => json_text(&report)?,
    };
    emit(&a.output, &text)
}

fn capacity(a: CapacityArgs) -> Outcome<()> {
    format(&a.output, &[Format::Json])?;
    let k = read_set(&a.set)?;
    let e = potential::capacity_estimate_with(&k, a.n, a.resolution)?;
    let text = json_text(&json!({
        "n": a.n,
        "estimate": e.estimate,
        "transfinite": e.transfinite,
        "chebyshev": e.chebyshev,
        "known": k.known_capacity(),
    }))?;
    emit(&a.output, &text)
}

fn fekete(a: FeketeArgs) -> Outcome<()> {
    let fmt = format(&a.output, &[Format::Json, Format::Svg])?;
    let k = read_set(&a.set)?;
    let report = experiments::fekete_lemniscate_experiment_with(&k, a.n, a.resolution, a.level)?;
    let text = match fmt {
        Format::Svg => lemniscate::render_svg(&report.polynomial, a.level, a.resolution.min(1024))?,
        _ => {
            let mut v = serde_json::to_value(&report)?;
            v["zeros"] = serde_json::to_value(report.polynomial.zeros())?;
            json_text(&v)?
        }
    };
    emit(&a.output, &text)
}

fn sample(a: SampleArgs) -> Outcome<()> {
    let fmt = format(&a.output, &[Format::Csv, Format::Json])?;
    let k = read_set(&a.set)?;
    let mu = potential::equilibrium_sample(&k, a.n, a.seed)?;
    let text = match fmt {
        Format::Json => json_text(&json!({ "points": mu.points(), "weights": mu.weights() }))?,
        _ => {
            let mut buf = Vec::new();
            mu.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("csv output is UTF-8")
        }
    };
    emit(&a.output, &text)
}

fn experiment(a: ExperimentArgs) -> Outcome<()> {
    let fmt = format(&a.output, &[Format::Json, Format::Csv, Format::Svg])?;
    let mut cfg = ExperimentConfig::from_json(&read(&a.config)?)?;
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = a.trials {
        cfg.trials = trials;
    }
    if let Some(degree) = a.degree {
        cfg.degree = degree;
    }
    let out = experiments::run_experiment(&cfg)?;
    let text = match fmt {
        Format::Csv => out.csv,
        Format::Svg => out
            .svg
            .ok_or_else(|| Failure::Usage("this experiment has no SVG; set outputs.svg in the config".into()))?,
        Format::Json => json_text(&out.summary)?,
    };
    emit(&a.output, &text)
}

fn plot(a: PlotArgs) -> Outcome<()> {
    format(&a.output, &[Format::Svg])?;
    let p = read_poly(&a.poly)?;
    emit(&a.output, &lemniscate::render_svg(&p, a.level, a.resolution)?)
}

fn census(a: CensusArgs) -> Outcome<()> {
    let fmt = format(&a.output, &[Format::Csv, Format::Json])?;
    let rows = experiments::ehp_census(a.n_min, a.n_max)?;
    let text = match fmt {
        Format::Json => json_text(&rows)?,
        _ => experiments::to_csv(&rows)?,
    };
    emit(&a.output, &text)
}
