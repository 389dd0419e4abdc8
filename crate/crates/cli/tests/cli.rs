use riesz_lab::geometry::IntervalSet;
use riesz_lab::harmonic::{Domain, ExponentialSystem};
use riesz_lab::report::to_json_string;
use riesz_lab::riesz::riesz_bounds;
use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riesz-lab"))
        .args(args)
        .args(["--out", dir.to_str().unwrap()])
        .env_remove("RIESZ_LAB_SEED")
        .output()
        .unwrap()
}

fn report(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap()).unwrap()
}

#[test]
fn usage_errors_exit_64() {
    let out = Command::new(env!("CARGO_BIN_EXE_riesz-lab")).arg("bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(64));
    let out = Command::new(env!("CARGO_BIN_EXE_riesz-lab")).output().unwrap();
    assert_eq!(out.status.code(), Some(64));
    let out = Command::new(env!("CARGO_BIN_EXE_riesz-lab")).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn invalid_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["bounds", "--set", "1,0"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["bounds", "--trunc", "abc"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["translate-test", "--perturb", "sideways:0.1"]).status.code(), Some(2));
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "nonsense = 1\n").unwrap();
    assert_eq!(run(dir.path(), &["bounds", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn singular_section_exits_3_with_flagged_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["bounds", "--set", "0,0.1", "--trunc", "40"]);
    assert_eq!(out.status.code(), Some(3));
    let r = report(dir.path(), "bounds");
    assert_eq!(r["status"], "flagged");
    assert!(r["payload"]["constant"].is_null());
}

#[test]
fn threshold_prints_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["threshold"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let value: f64 = text.lines().next().unwrap().trim().parse().unwrap();
    assert!((value - 1.2720196495141103).abs() <= 1e-12);
}

#[test]
fn construct_set_measure() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["construct-set", "--stages", "2", "--splits", "3"]);
    assert!(out.status.success());
    let r = report(dir.path(), "construct-set");
    assert!((r["payload"]["measure"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    let csv = std::fs::read_to_string(dir.path().join("construct-set.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "lo,hi,length");
}

#[test]
fn bounds_payload_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["bounds", "--set", "0,1", "--lattice", "1", "--trunc", "20"]);
    assert!(out.status.success());
    let r = report(dir.path(), "bounds");
    let system = ExponentialSystem::symmetric_lattice(1.0, 20.0).unwrap();
    let domain = Domain::Intervals(IntervalSet::single(0.0, 1.0).unwrap());
    let lib = riesz_bounds(&system, &domain, None).unwrap();
    let expected: Value = serde_json::from_str(&to_json_string(&lib).unwrap()).unwrap();
    assert_eq!(r["payload"], expected);
    assert!((lib.constant.unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# kadec run\ndelta = 0.1\nn = 16\nseed = 4\n").unwrap();
    let out = run(dir.path(), &["kadec", "--config", cfg.to_str().unwrap(), "--n", "8"]);
    assert!(out.status.success());
    let r = report(dir.path(), "kadec");
    assert_eq!(r["seed"], 4);
    assert_eq!(r["payload"]["n"], 8);
    assert_eq!(r["config"]["delta"], "0.1");
}

#[test]
fn seed_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_riesz-lab"))
        .args(["pigeonhole", "--count", "9", "--points", "16", "--out", dir.path().to_str().unwrap()])
        .env("RIESZ_LAB_SEED", "12")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(report(dir.path(), "pigeonhole")["seed"], 12);
}

#[test]
fn disk_csv_has_one_row_per_angle() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["disk", "--trunc", "1", "--eps", "0.1", "--theta", "12", "--radial", "32", "--angular", "64"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("disk.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
    assert_eq!(report(dir.path(), "disk")["payload"]["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn seeded_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["translate-test", "--trunc", "8", "--perturb", "random:0.1", "--seed", "3", "--name", "a"];
    assert!(run(dir.path(), &args).status.success());
    let first = report(dir.path(), "a");
    assert!(run(dir.path(), &args).status.success());
    let second = report(dir.path(), "a");
    assert_eq!(first["payload"], second["payload"]);
    assert_eq!(first["fingerprints"], second["fingerprints"]);
    let mut other = args;
    other[6] = "4";
    assert!(run(dir.path(), &other).status.success());
    assert_ne!(report(dir.path(), "a")["fingerprints"], first["fingerprints"]);
}
