//! The binary against the library: same inputs, same outputs.

use std::path::Path;
use std::process::{Command, Output};

use lemniscates::constructions::{chebyshev_monic, ehp_polynomial, lemniscate_power, Sign};
use lemniscates::experiments::{ehp_census, to_csv, DEFAULT_SEED};
use lemniscates::lemniscate::{count_components, render_svg};
use lemniscates::potential::{capacity_estimate_with, equilibrium_sample, CompactSetModel};
use lemniscates::{CoefficientVector, MonicPolynomial};
use serde_json::Value;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lemniscates"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn chebyshev_file_counts_thirty() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&run(&["construct", "chebyshev", "--n", "30", "--out", "cheb30.json"], dir.path()));
    let text = std::fs::read_to_string(dir.path().join("cheb30.json")).unwrap();
    assert_eq!(text.trim_end(), chebyshev_monic(30, 2.0).unwrap().to_json());
    let report: Value = serde_json::from_str(&stdout(&run(&["components", "--poly", "cheb30.json"], dir.path()))).unwrap();
    assert_eq!(report["count"], 30);
    let lib = count_components(&MonicPolynomial::from_json(&text).unwrap(), 1024, 1.0).unwrap();
    assert_eq!(report, serde_json::to_value(&lib).unwrap());
}

#[test]
fn ehp_twenty_has_nineteen_components() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&run(&["construct", "ehp", "--n", "20", "--out", "e20.json"], dir.path()));
    let csv = stdout(&run(&["components", "--poly", "e20.json", "--format", "csv"], dir.path()));
    // The file stores zeros in sorted order, so compare against the file.
    let text = std::fs::read_to_string(dir.path().join("e20.json")).unwrap();
    assert_eq!(text.trim_end(), ehp_polynomial(20).unwrap().to_json());
    let lib = count_components(&MonicPolynomial::from_json(&text).unwrap(), 1024, 1.0).unwrap();
    assert_eq!(lib.count, 19);
    assert_eq!(csv, format!("degree,method,count,margin,ambiguous\n{}\n", lib.csv_row()));
}

#[test]
fn segment_capacity_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let set = r#"{"variant":"segment","a":[-1,0],"b":[1,0]}"#;
    let v: Value = serde_json::from_str(&stdout(&run(&["capacity", "--set", set, "--n", "64"], dir.path()))).unwrap();
    let lib = capacity_estimate_with(&CompactSetModel::from_json(set).unwrap(), 64, 4096).unwrap();
    assert_eq!(v["estimate"].as_f64().unwrap(), lib.estimate);
    assert!((lib.estimate - 0.5).abs() < 0.025);
    assert_eq!(v["known"].as_f64().unwrap(), 0.5);
}

#[test]
fn set_can_come_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("disk.json"), r#"{"variant":"disk","center":[0,0],"radius":0.5}"#).unwrap();
    let v: Value = serde_json::from_str(&stdout(&run(&["capacity", "--set", "disk.json"], dir.path()))).unwrap();
    assert!((v["estimate"].as_f64().unwrap() - 0.5).abs() < 0.025);
}

#[test]
fn lemniscate_power_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(
        &["construct", "lemniscate-power", "--n", "5", "--q", "[0, 3, 0, 1]", "--sign", "plus"],
        dir.path(),
    ));
    let q = CoefficientVector::from_real(&[0.0, 3.0, 0.0, 1.0]).unwrap();
    assert_eq!(text.trim_end(), lemniscate_power(&q, 5, Sign::PlusOne).unwrap().to_json());
}

#[test]
fn sampling_uses_the_default_seed() {
    let dir = tempfile::tempdir().unwrap();
    let set = r#"{"variant":"segment","a":[-1,0],"b":[1,0]}"#;
    let a = stdout(&run(&["sample", "--set", set, "--n", "50"], dir.path()));
    let b = stdout(&run(&["sample", "--set", set, "--n", "50", "--seed", &DEFAULT_SEED.to_string()], dir.path()));
    assert_eq!(a, b);
    let mut buf = Vec::new();
    equilibrium_sample(&CompactSetModel::from_json(set).unwrap(), 50, DEFAULT_SEED)
        .unwrap()
        .write_csv(&mut buf)
        .unwrap();
    assert_eq!(a.as_bytes(), &buf[..]);
    let c = stdout(&run(&["sample", "--set", set, "--n", "50", "--seed", "7"], dir.path()));
    assert_ne!(a, c);
}

#[test]
fn plot_matches_render_svg() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&run(&["construct", "roots-of-unity", "--n", "6", "--out", "p.json"], dir.path()));
    let svg = stdout(&run(&["plot", "--poly", "p.json", "--resolution", "128"], dir.path()));
    let p = MonicPolynomial::from_json(&std::fs::read_to_string(dir.path().join("p.json")).unwrap()).unwrap();
    assert_eq!(svg, render_svg(&p, 1.0, 128).unwrap());
}

#[test]
fn census_matches_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let csv = stdout(&run(&["ehp-census", "--n-min", "3", "--n-max", "12"], dir.path()));
    assert_eq!(csv, to_csv(&ehp_census(3, 12).unwrap()).unwrap());
}

#[test]
fn experiment_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"kind":"mean_ratio","set":{"variant":"circle","center":[0,0],"radius":1},
        "degree":20,"trials":4,"resolution":256,"outputs":{"csv":"trials.csv"}}"#;
    std::fs::write(dir.path().join("cfg.json"), config).unwrap();
    let first = stdout(&run(&["experiment", "--config", "cfg.json"], dir.path()));
    let csv = std::fs::read_to_string(dir.path().join("trials.csv")).unwrap();
    let second = stdout(&run(&["experiment", "--config", "cfg.json"], dir.path()));
    assert_eq!(first, second);
    assert_eq!(csv, std::fs::read_to_string(dir.path().join("trials.csv")).unwrap());
    assert_eq!(csv.lines().count(), 5);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["config"]["seed"], DEFAULT_SEED);
}

#[test]
fn exit_codes_separate_usage_from_domain_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = run(&["components", "--poly", "missing.json"], dir.path());
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("missing.json"));

    std::fs::write(dir.path().join("bad.json"), "{\"zeros\": [").unwrap();
    assert_eq!(run(&["components", "--poly", "bad.json"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["construct", "ehp", "--n", "2"], dir.path()).status.code(), Some(1));

    assert_eq!(run(&["components", "--bogus"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["capacity", "--set", "{}", "--format", "svg"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["construct", "period-m", "--n", "3"], dir.path()).status.code(), Some(2));
}
