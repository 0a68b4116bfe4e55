//! The `mfann` binary: subcommands, output formats and exit codes.

use std::process::{Command, Output};

use serde_json::Value;

fn mfann(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfann")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn validate_catalog() {
    assert_eq!(code(&mfann(&["validate", "a-inf-1", "--n-max", "5"])), 0);
    let out = mfann(&["validate", "d-inf-2", "--n-max", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out).as_array().unwrap().len(), 4 + 4 * 3);
    assert_eq!(code(&mfann(&["validate", "e-inf-1"])), 1);
    assert_eq!(code(&mfann(&["validate", "a-inf-1/nope"])), 1);
}

#[test]
fn validate_json_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("phi2.json");
    let out = mfann(&["double", "a-inf-1/phi?n=2"]);
    let source = json(&out)[0]["source"].clone();
    std::fs::write(&good, source.to_string()).unwrap();
    assert_eq!(code(&mfann(&["validate", good.to_str().unwrap()])), 0);

    let mut broken = source.clone();
    broken["phi"][0][1] = Value::String("y^3".into());
    let bad = dir.path().join("broken.json");
    std::fs::write(&bad, broken.to_string()).unwrap();
    let out = mfann(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not a matrix factorization") && err.contains("entry"), "{err}");

    let ann = mfann(&["ann", good.to_str().unwrap(), "-N", "8"]);
    assert_eq!(code(&ann), 0);
    assert_eq!(json(&ann)[0]["annihilator"]["upper"]["generators"], serde_json::json!(["x", "y^2"]));
}

#[test]
fn ann_examples() {
    let out = mfann(&["ann", "a-inf-1/phi?n=3", "-N", "10"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)[0];
    assert_eq!(r["annihilator"]["upper"]["generators"], serde_json::json!(["x", "y^3"]));
    assert_eq!(r["annihilator"]["status"], "certified-exact");

    let out = mfann(&["ann", "d-inf-1/gamma?n=1", "-N", "8", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("computed (x^2, x*y, y^2)"));

    let out = mfann(&["--field", "q", "ann", "a-inf-2/psi+?n=2", "-N", "8"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("configuration error"));

    let out = mfann(&["--field", "qi", "ann", "a-inf-2/psi+?n=2", "-N", "6"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)[0]["annihilator"]["upper"]["generators"], serde_json::json!(["x", "z", "y^2"]));
}

#[test]
fn coarse_truncation_is_a_mismatch() {
    let out = mfann(&["ann", "a-inf-1/phi?n=4", "-N", "3"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("mismatch"));
}

#[test]
fn topology_examples() {
    let out = mfann(&["topology", "a-inf-1", "--subfamily", "cm0"]);
    assert_eq!(code(&out), 0);
    let r = json(&out);
    assert_eq!(r["verdict"], "not-compact-evidence");
    assert_eq!(r["global_intersection"]["generators"], serde_json::json!(["x"]));

    let out = mfann(&["topology", "d-inf-1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["evidence"]["label"], "R/xR ⊕ R/yR");

    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("a2.dot");
    let out = mfann(&["topology", "a-inf-2", "--dot", dot.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["evidence"]["label"], "R/(z-ix)R");
    assert!(std::fs::read_to_string(dot).unwrap().starts_with("digraph"));
}

#[test]
fn double_reports_both_sides() {
    let out = mfann(&["double", "a-inf-1/x", "-N", "6"]);
    assert_eq!(code(&out), 0);
    let r = &json(&out)[0];
    assert_eq!(r["double_valid"], true);
    assert_eq!(r["double"]["spec"]["f"], "x^2 + z^2");
    assert_eq!(r["double"]["n"], 2);
    assert!(r["source_annihilator"].is_object() && r["double_annihilator"].is_object());

    let out = mfann(&["double", "a-inf-2/z-ix", "-N", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)[0]["double"]["spec"]["variables"], serde_json::json!(["x", "y", "z", "w"]));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&mfann(&[])), 1);
    assert_eq!(code(&mfann(&["frobnicate"])), 1);
    assert_eq!(code(&mfann(&["ann", "a-inf-1/x", "--trunc", "2"])), 1);
    assert_eq!(code(&mfann(&["ann", "a-inf-1/x", "--n-max", "0"])), 1);
    assert_eq!(code(&mfann(&["--field", "fp:15", "ann", "a-inf-1/x"])), 1);
    assert_eq!(code(&mfann(&["--help"])), 0);
    assert_eq!(code(&mfann(&["--version"])), 0);
}

#[test]
fn reproduce_with_reduced_coverage() {
    let out = mfann(&["reproduce-paper", "--n-max", "1", "--format", "text"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("reduced coverage"));
    assert!(text.contains("overall: PASS"));
}

#[test]
fn reproduce_with_coarse_truncation_fails() {
    let out = mfann(&["reproduce-paper", "-N", "3", "--n-max", "4"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("a-inf-1/phi?n=3"), "{err}");
    assert_eq!(json(&out)["pass"], false);
}
