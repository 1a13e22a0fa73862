use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lightspan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lightspan"))
        .args(args)
        .env("LIGHTSPAN_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = lightspan(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_cycle() {
    assert_eq!(ok(&["gen", "cycle", "--n", "4"]), "4 4\n0 1 1\n1 2 1\n2 3 1\n0 3 1\n");
}

#[test]
fn tree_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let t = dir.path().join("t.txt");
    let r = dir.path().join("r.json");
    let csv = dir.path().join("p.csv");
    ok(&["gen", "random-geometric", "--n", "64", "--seed", "3", "-o", s(&g)]);
    ok(&["tree", "-i", s(&g), "--rho", "0.5", "--strategy", "last-median", "-o", s(&t), "--report", s(&r)]);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&r).unwrap()).unwrap();
    assert!(report["lightness_tree"].as_f64().unwrap() <= 1.5);

    let out: Value = serde_json::from_str(&ok(&["analyze", "-i", s(&t), "--against", s(&g), "--csv", s(&csv)])).unwrap();
    assert_eq!(out["pass"], Value::Bool(true));
    assert_eq!(out["edges"], 63);
    assert!(out["lightness"].as_f64().unwrap() <= 1.5);
    let csv = std::fs::read_to_string(&csv).unwrap();
    assert!(csv.starts_with("eps,gamma,gamma_coarse\n"));
}

#[test]
fn spanner_terminal_mode() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let k = dir.path().join("k.txt");
    let h = dir.path().join("h.txt");
    ok(&["gen", "grid", "--rows", "6", "--cols", "6", "-o", s(&g)]);
    std::fs::write(&k, "0\n35\n17\n").unwrap();
    let out = ok(&["spanner", "-i", s(&g), "--mode", "terminal", "--terminals", s(&k), "--delta", "0.5", "-o", s(&h)]);
    assert!(out.is_empty());
    let analyzed: Value = serde_json::from_str(&ok(&["analyze", "-i", s(&h), "--against", s(&g)])).unwrap();
    assert!(analyzed["lightness"].as_f64().unwrap() <= 1.5 + 1e-9);
}

#[test]
fn certify_lower_bound() {
    let out: Value = serde_json::from_str(&ok(&["certify", "--theorem", "6.1", "--n", "256", "--rho", "0.03125"])).unwrap();
    assert_eq!(out["pass"], Value::Bool(true));
    assert_eq!(out["n"], 257);
}

#[test]
fn certify_small_suites() {
    for th in ["3.1", "3.2", "4.1", "4.2", "5.1"] {
        let out: Value = serde_json::from_str(&ok(&["certify", "--theorem", th, "--n", "48", "--seed", "2"])).unwrap();
        assert_eq!(out["pass"], Value::Bool(true), "{th}");
    }
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    ok(&["gen", "er-weighted", "--n", "40", "--p", "0.2", "--seed", "9", "-o", s(&g)]);
    let run = || {
        let h = dir.path().join("h.txt");
        let r = dir.path().join("r.json");
        ok(&["spanner", "-i", s(&g), "--rho", "0.25", "--ranking", "canonical", "-o", s(&h), "--report", s(&r)]);
        (std::fs::read(&h).unwrap(), std::fs::read(&r).unwrap())
    };
    assert_eq!(run(), run());
    let a = ok(&["gen", "random-geometric", "--n", "50", "--seed", "4"]);
    assert_eq!(a, ok(&["gen", "random-geometric", "--n", "50", "--seed", "4"]));
}

#[test]
fn violations_exit_one_with_witness() {
    // An edge missing from the host graph is an input error.
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let h = dir.path().join("h.txt");
    ok(&["gen", "cycle", "--n", "5", "-o", s(&g)]);
    std::fs::write(&h, "5 1\n0 2 1\n").unwrap();
    let out = lightspan(&["analyze", "-i", s(&h), "--against", s(&g)]);
    assert_eq!(out.status.code(), Some(2));

    // A disconnected subgraph is reported as a failed invariant.
    std::fs::write(&h, "5 1\n0 1 1\n").unwrap();
    let out = lightspan(&["analyze", "-i", s(&h), "--against", s(&g)]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "fail");
    assert!(v["witness"].is_array());
}

#[test]
fn refuses_large_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    ok(&["gen", "path", "--n", "2500", "-o", s(&g)]);
    let out = lightspan(&["tree", "-i", s(&g), "--rho", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}
