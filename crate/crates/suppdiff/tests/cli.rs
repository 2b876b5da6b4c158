use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use suppdiff::report::SuiteStatus;

fn suppdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_suppdiff")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

/// Splits a replay command produced by the tool; arguments are single-quoted when needed.
fn words(cmd: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    for c in cmd.chars() {
        match c {
            '\'' => quoted = !quoted,
            ' ' if !quoted => out.push(std::mem::take(&mut cur)),
            c => cur.push(c),
        }
    }
    out.push(cur);
    out
}

fn replay(cmd: &str) -> Output {
    let w = words(cmd);
    assert_eq!(w[0], "suppdiff");
    let args: Vec<&str> = w[1..].iter().map(String::as_str).collect();
    suppdiff(&args)
}

#[test]
fn exit_codes() {
    assert_eq!(suppdiff(&["verify", "--suite", "fact14", "--set", "ex3b", "--samples", "200"]).status.code(), Some(0));
    assert_eq!(suppdiff(&["analyze", "--set", "no-such-set"]).status.code(), Some(1));
    assert_eq!(suppdiff(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(suppdiff(&["check", "--set", "d4"]).status.code(), Some(1));
    assert_eq!(suppdiff(&["--help"]).status.code(), Some(0));
    assert_eq!(suppdiff(&["--version"]).status.code(), Some(0));
    // a set that is not (H) skips the gauge suite
    let out = suppdiff(&["verify", "--suite", "prop-fa", "--set", "ex2-A3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "skipped");
    assert_eq!(SuiteStatus::Alarm.exit_code(), 2);
    assert_eq!(SuiteStatus::Indeterminate.exit_code(), 3);
}

#[test]
fn reports_carry_schema_and_exit_code() {
    let out = suppdiff(&["analyze", "--set", "ex2-A3", "--dual=-1,-1"]);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["op"], "analyze");
    assert_eq!(v["exit_code"], 0);
    assert!(out.stdout.ends_with(b"\n"));
}

#[test]
fn scan_writes_csv() {
    let out = suppdiff(&["scan", "--set", "ex3b", "--grid", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("xstar1,xstar2,value,diameter,verdict"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    // the kink on the diagonal is the only non-differentiable direction
    assert_eq!(rows.iter().filter(|r| r.ends_with(",non_differentiable")).count(), 1);
}

#[test]
fn scan_reads_duals_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let duals = dir.path().join("duals.csv");
    std::fs::write(&duals, "u,v\n-1,-2\n-3,-1\n").unwrap();
    let out = suppdiff(&["scan", "--set", "hyperbola", "--duals", duals.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    let values: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!((values[0] + 2.0 * 2f64.sqrt()).abs() < 1e-9);
    assert!((values[1] + 2.0 * 3f64.sqrt()).abs() < 1e-9);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = suppdiff(&["check", "--set", "ex3b", "--condition", "convexity", "--samples", "100", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["report"]["verdict"], "holds_on_sample");
}

#[test]
fn replay_commands_reproduce_violations() {
    for args in [
        vec!["check", "--set", "d4", "--condition", "r-sas", "--samples", "150"],
        vec!["check", "--set", r#"{"a":[1,2],"cone":{"variant":"orthant","dim":2}}"#, "--condition", "r-sas", "--samples", "150"],
        vec!["check", "--production", "phi-g", "--axiom", "F.3c", "--samples", "150"],
    ] {
        let first = suppdiff(&args);
        let v = json(&first);
        assert_eq!(v["report"]["verdict"], "violated", "{args:?}");
        let again = replay(v["replay"].as_str().unwrap());
        assert_eq!(json(&again)["report"], v["report"], "{args:?}");
    }
}

#[test]
fn scenario_files_run() {
    let dir = tempfile::tempdir().unwrap();
    let csv_dir = dir.path().join("csv");
    std::fs::create_dir(&csv_dir).unwrap();
    let scenario = serde_json::json!({
        "set": "ex-adsz-L",
        "samples": 200,
        "grid": 20,
        "csv_dir": csv_dir,
        "operations": [
            {"op": "analyze", "dual": [[-1.0, -1.0]]},
            {"op": "scan"},
            {"op": "verify", "suite": "fact14"}
        ]
    });
    let path = dir.path().join("scenario.json");
    std::fs::write(&path, serde_json::to_string_pretty(&scenario).unwrap()).unwrap();
    let a = suppdiff(&["run", path.to_str().unwrap()]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = suppdiff(&["run", path.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    assert!(std::fs::read_dir(&csv_dir).unwrap().count() >= 1);

    std::fs::write(&path, r#"{"set": "ex3b", "operations": [], "colour": 1}"#).unwrap();
    assert_eq!(suppdiff(&["run", path.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(suppdiff(&["run", Path::new("/nonexistent/scenario.json").to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn fixture_listing() {
    let v = json(&suppdiff(&["list-fixtures", "--format", "json"]));
    let names: Vec<&str> = v["fixtures"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    for n in ["ex1", "ex2-A3", "ex3a", "d4", "ex-adsz", "phi-g", "d4-gauge"] {
        assert!(names.contains(&n), "{n}");
    }
    let text = String::from_utf8(suppdiff(&["list-fixtures"]).stdout).unwrap();
    assert!(text.lines().count() >= names.len());
}
