use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn certkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_certkit")).args(args).env_remove("CERTKIT_NODE_BUDGET").output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = certkit(&full);
    let value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}; stderr {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), value)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn envelope_shape() {
    let (code, v) = json(&["pins", "solve", "--doubled-area", "4042"]);
    assert_eq!(code, 0);
    assert_eq!(v["tool"], "certkit");
    assert_eq!(v["subcommand"], "pins solve");
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["result"]["cost"], 128);
    assert_eq!(v["result"]["status"], "certified_optimal");
    assert!(v.get("timings_ms").is_none());
    let (_, timed) = json(&["--timings", "pins", "solve", "--doubled-area", "10"]);
    assert!(timed["timings_ms"].is_number());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("f.txt");
    fs::write(&table, "1 1\n2 1\n3 1\n4 1\n5 2\n").unwrap();
    let (code, v) = json(&["funceq", "check", "--input", path(&table)]);
    assert_eq!(code, 1);
    assert!(v["result"]["violation_count"].as_u64().unwrap() >= 1);

    assert_eq!(json(&["gcdset", "check", "--elements", "6,10,15"]).0, 1);
    assert_eq!(json(&["gcdset", "search", "--size", "3", "--max", "100"]).0, 0);
    assert_eq!(json(&["concur", "batch", "--count", "5", "--perturb", "1.05"]).0, 1);

    assert_eq!(certkit(&["pins", "solve", "--doubled-area", "0"]).status.code(), Some(2));
    assert_eq!(certkit(&["pins", "solve", "--doubled-area", "4042", "--cap", "100"]).status.code(), Some(2));
    assert_eq!(certkit(&["--node-budget", "3", "gcdset", "search", "--size", "4", "--max", "200"]).status.code(), Some(2));
    assert_eq!(certkit(&["funceq", "check", "--input", "/nonexistent/table"]).status.code(), Some(2));
    assert_eq!(certkit(&["gcdset", "construct", "--k", "2", "--p", "2", "--q", "3"]).status.code(), Some(2));
    assert_eq!(certkit(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn node_budget_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_certkit"))
        .args(["gcdset", "search", "--size", "4", "--max", "200"])
        .env("CERTKIT_NODE_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn packing_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pack.txt");
    let (code, built) = json(&["pack", "build", "--side", "9/2", "--out", path(&file)]);
    assert_eq!(code, 0);
    let (code, checked) = json(&["pack", "validate", "--input", path(&file), "--brute-force"]);
    assert_eq!(code, 0);
    assert_eq!(built["result"]["report"], checked["result"]["report"]);

    fs::write(&file, "3\n0 0 0\n").unwrap();
    let (code, v) = json(&["pack", "validate", "--input", path(&file)]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["report"]["first_outside"], 0);
    fs::write(&file, "3\n1 0 1/2\n3/2 0 1/2\n").unwrap();
    let (code, v) = json(&["pack", "validate", "--input", path(&file)]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["report"]["first_overlap"], serde_json::json!([0, 1]));
    fs::write(&file, "3\n1 zero\n").unwrap();
    assert_eq!(certkit(&["pack", "validate", "--input", path(&file)]).status.code(), Some(2));
}

#[test]
fn cyclic_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sol.txt");
    let (code, solved) = json(&["cyclic", "solve", "--n", "6", "--seed", "11", "--out", path(&file)]);
    assert_eq!(code, 0);
    assert!(solved["result"]["max_deviation_from_canonical"].as_f64().unwrap() <= 1e-6);
    let (code, verified) = json(&["cyclic", "verify", "--input", path(&file)]);
    assert_eq!(code, 0);
    assert_eq!(solved["result"]["solution"], verified["result"]["solution"]);

    fs::write(&file, "1\n2\n1\n2\n1\n3\n1\n2\n").unwrap();
    assert_eq!(json(&["cyclic", "verify", "--input", path(&file)]).0, 1);

    let out = certkit(&["cyclic", "solve", "--n", "5", "--init", path(&file)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn trace_and_constructions() {
    let (code, v) = json(&["funceq", "trace", "--limit", "50", "--steps"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["steps"].as_array().unwrap().len(), 50);
    let (code, v) = json(&["gcdset", "construct", "--k", "2", "--p", "2,5", "--q", "3,7"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["elements"], serde_json::json!([10, 14, 15, 21]));
    let (code, v) = json(&["gcdset", "construct", "--k", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["elements"], serde_json::json!([1]));
}

#[test]
fn human_output_is_flat() {
    let out = certkit(&["pins", "oracle", "--doubled-area", "7", "--radius", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("certkit "));
    assert!(text.contains("verdict: pass"));
    assert!(text.contains("result.cost: "));
}

#[test]
fn packing_svg_has_one_hexagon_per_triangle() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("p.svg");
    let (_, v) = json(&["pack", "build", "--side", "7", "--svg", path(&svg)]);
    let n = v["result"]["report"]["count"].as_u64().unwrap() as usize;
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    assert_eq!(text.matches("class=\"triangle\"").count(), n);
    assert_eq!(text.matches("class=\"hexagon\"").count(), n);
    assert_eq!(text.matches("class=\"delta\"").count(), 1);

    let file = dir.path().join("empty.txt");
    fs::write(&file, "5\n").unwrap();
    let (code, _) = json(&["pack", "render", "--input", path(&file), "--svg", path(&svg)]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<polygon").count(), 1);
}

#[test]
fn concurrency_svg_structure() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("c.svg");
    let (code, _) = json(&["concur", "batch", "--count", "1", "--seed", "9", "--svg", path(&svg)]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("class=\"rectangle\"").count(), 3);
    assert_eq!(text.matches("class=\"circumcircle\"").count(), 3);
    assert_eq!(text.matches("class=\"concurrent-line\"").count(), 3);
    assert_eq!(text.matches("class=\"common-point\"").count(), 1);
}

#[test]
fn seeded_output_is_stable() {
    let a = certkit(&["--format", "json", "concur", "batch", "--seed", "5", "--count", "10"]).stdout;
    let b = certkit(&["--format", "json", "concur", "batch", "--seed", "5", "--count", "10"]).stdout;
    let c = certkit(&["--format", "json", "concur", "batch", "--seed", "6", "--count", "10"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}
