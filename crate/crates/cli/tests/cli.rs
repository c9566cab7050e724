use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ambipref(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ambipref")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

struct Builtin {
    _dir: tempfile::TempDir,
    path: PathBuf,
}

fn builtin(name: &str) -> Builtin {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join(format!("{name}.json"));
    let out = ambipref(&["gen", "--builtin", name, "-o", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    Builtin { _dir: dir, path }
}

impl Builtin {
    fn arg(&self) -> &str {
        self.path.to_str().unwrap()
    }
}

#[test]
fn evaluate_same_act_is_indifferent() {
    let inst = builtin("disjoint-pair");
    let out = ambipref(&[
        "evaluate", "--instance", inst.arg(), "--model", "gb", "--left", "1/2,-1/2", "--right", "1/2,-1/2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["relation"], "indifferent");
    assert_eq!(v["forward_margin"], "0");
    assert_eq!(v["backward_margin"], "0");
}

#[test]
fn evaluate_reports_incomparability() {
    let inst = builtin("cutting-intervals");
    let out = ambipref(&[
        "evaluate", "--instance", inst.arg(), "--model", "generalized-bewley", "--left", "11/20,-9/20", "--right", "0,0",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["relation"], "incomparable");
}

#[test]
fn analyze_disjoint_pair() {
    let inst = builtin("disjoint-pair");
    let out = ambipref(&["analyze", "--instance", inst.arg()]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["complete_param"], true);
    assert_eq!(v["cbt_param"], false);
}

#[test]
fn audit_lists_requested_axioms() {
    let inst = builtin("touching-intervals");
    let out = ambipref(&[
        "audit", "--instance", inst.arg(), "--model", "conj", "--axioms", "cbt,nc", "--resolution", "2", "--radius", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["axiom"], "constant-bound-transitivity");
    assert_eq!(reports[0]["verdict"], "pass");
}

#[test]
fn slice_writes_csv() {
    let inst = builtin("cutting-intervals");
    let out = ambipref(&["slice", "--instance", inst.arg(), "--direction", "1,-1", "--samples", "16", "--alpha", "3/4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "theta,maxmin,minmax,half,alpha");
    assert_eq!(lines.len(), 17);
    assert!(lines[1].starts_with("0,1,1,1,1"));
}

#[test]
fn gen_is_deterministic() {
    let a = ambipref(&["gen", "--seed", "42", "--params", r#"{"num_states": 3}"#]);
    let b = ambipref(&["gen", "--seed", "42", "--params", r#"{"num_states": 3}"#]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["states"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_audit_suites_pass_over_100_seeds() {
    let out = ambipref(&["verify", "--suites", "thm2,thm3,thm4", "--seeds", "0..99"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    for e in v["suites"].as_array().unwrap() {
        assert_eq!(e["instances"], 103);
        assert!(e["counterexamples"].as_array().unwrap().is_empty());
    }
}

#[test]
fn verify_exits_1_when_a_suite_fails() {
    // on seed 2 maxmin = minmax in every battery direction, so no mixture violation exists
    let out = ambipref(&["verify", "--suites", "fig4", "--seeds", "2", "--no-builtins"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["passed"], false);
}

#[test]
fn verify_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = ambipref(&["verify", "--suites", "prop4", "--seeds", "0..3", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"states\": [").unwrap();
    let bad = bad.to_str().unwrap();
    let inst = builtin("disjoint-pair");
    let cases: Vec<Vec<&str>> = vec![
        vec!["verify", "--suites", "thm9"],
        vec!["verify", "--seeds", "9..1"],
        vec!["analyze", "--instance", "/nonexistent/instance.json"],
        vec!["analyze", "--instance", bad],
        vec!["evaluate", "--instance", inst.arg(), "--model", "nope", "--left", "0,0", "--right", "0,0"],
        vec!["evaluate", "--instance", inst.arg(), "--model", "gb", "--left", "f", "--right", "0,0"],
        vec!["audit", "--instance", inst.arg(), "--model", "gb", "--radius", "5"],
        vec!["slice", "--instance", inst.arg(), "--direction", "1,1"],
        vec!["gen", "--seed", "1", "--params", r#"{"num_states": 9}"#],
        vec!["gen", "--builtin", "nope"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = ambipref(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn thread_cap_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_ambipref"))
        .args(["verify", "--suites", "thm2", "--seeds", "0..1"])
        .env("AMBIPREF_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_ambipref"))
        .args(["verify", "--suites", "thm2", "--seeds", "0..1"])
        .env("AMBIPREF_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
