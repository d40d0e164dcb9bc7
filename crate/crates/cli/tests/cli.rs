use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nosignal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nosignal"))
        .args(args)
        .env_remove("NOSIGNAL_LOG")
        .output()
        .expect("spawn nosignal")
}

fn read_report(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn flash_reports_half_trace_distance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("flash.json");
    let run = nosignal(&[
        "run",
        "--scenario",
        "flash",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        run.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let report = read_report(&out);
    assert!((report["trace_distance"].as_f64().unwrap() - 0.5).abs() <= 1e-9);
    assert_eq!(report["status"], "pass");
    assert!(report.get("witness").is_none());
}

#[test]
fn no_signaling_builtin_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ns.json");
    let run = nosignal(&[
        "run",
        "--scenario",
        "no-signaling",
        "--seed",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0));
    let report = read_report(&out);
    assert!(report["max_gap"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn unknown_kind_exits_two_and_names_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"name": "bad", "kind": "frobnicate", "seed": 1}"#).unwrap();
    let run = nosignal(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&run.stderr);
    assert!(
        stderr.contains("kind") && stderr.contains("frobnicate"),
        "{stderr}"
    );
}

#[test]
fn missing_seed_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("noseed.json");
    fs::write(&cfg, r#"{"name": "x", "kind": "contraction"}"#).unwrap();
    let run = nosignal(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("seed"));
}

#[test]
fn unknown_builtin_exits_two() {
    let run = nosignal(&["run", "--scenario", "tachyon", "--seed", "1"]);
    assert_eq!(run.status.code(), Some(2));
}

#[test]
fn failing_check_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("wrong.json");
    let out = dir.path().join("wrong-report.json");
    // The FLASH pair sits at trace distance 1/2, so expecting 0.3 must fail.
    fs::write(
        &cfg,
        r#"{"name": "wrong", "kind": "signaling", "seed": 5,
            "parameters": {"copies": 2, "trials": 50, "expected_trace_distance": 0.3}}"#,
    )
    .unwrap();
    let run = nosignal(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(1));
    let report = read_report(&out);
    assert_eq!(report["status"], "fail");
    assert!(report.get("witness").is_some());
}

#[test]
fn list_is_stable_and_complete() {
    let first = nosignal(&["list"]);
    let second = nosignal(&["list"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let text = String::from_utf8(first.stdout).unwrap();
    for name in [
        "flash",
        "no-signaling",
        "no-cloning",
        "contraction",
        "eq9-kraus",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
    let names: Vec<&str> = text
        .lines()
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"name": "det", "kind": "no_signaling_cert", "seed": 77,
            "parameters": {"map": "ideal_cloner", "state": "product", "n_povm_pairs": 20}}"#,
    )
    .unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("r{i}.json"));
        let run = nosignal(&[
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(
            run.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&run.stderr)
        );
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn csv_has_one_row_per_trial() {
    let run = nosignal(&[
        "run",
        "--scenario",
        "flash",
        "--seed",
        "2",
        "--format",
        "csv",
    ]);
    assert_eq!(run.status.code(), Some(0));
    let text = String::from_utf8(run.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("scenario_name,trial,metric,value"));
    assert_eq!(lines.count(), 1000);
}

#[test]
fn logging_stays_on_stderr() {
    let quiet = nosignal(&["run", "--scenario", "contraction", "--seed", "4"]);
    let loud = Command::new(env!("CARGO_BIN_EXE_nosignal"))
        .args(["run", "--scenario", "contraction", "--seed", "4"])
        .env("NOSIGNAL_LOG", "debug")
        .output()
        .unwrap();
    assert_eq!(quiet.stdout, loud.stdout);
    assert!(!loud.stderr.is_empty());
}
