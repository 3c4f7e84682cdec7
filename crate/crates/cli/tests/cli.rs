use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn chainrep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chainrep"))
        .args(args)
        .env_remove("CHAINREP_BUDGET_MB")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = chainrep(&all);
    let v = serde_json::from_slice(&out.stdout).expect("structured output");
    (out.status.code().unwrap(), v)
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn mindim_labelled_position() {
    let (code, v) = json(&["mindim", "--sig", "P1", "--formula", "P1(x)"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dimension"], 1);
    assert_eq!(v["config"]["signature"], serde_json::json!(["P1"]));
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn decide_reports_negative_answers_with_exit_1() {
    let out = chainrep(&["decide", "--dim", "1", "--formula", "x<y"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("minimal dimension 2"));
    assert_eq!(chainrep(&["decide", "--dim", "2", "--formula", "x<y"]).status.code(), Some(0));
}

#[test]
fn input_errors_exit_2_with_location() {
    assert_eq!(chainrep(&["mindim", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(chainrep(&["mindim"]).status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("chainrep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.mso");
    std::fs::write(&path, "x<y &\n  ~ (").unwrap();
    let out = chainrep(&["mindim", "--formula-file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.mso:2:"), "{err}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exhausted_budgets_exit_3() {
    let (code, v) = json(&["mindim", "--formula", "x<y & y<z", "--budget-monoid", "1"]);
    assert_eq!(code, 3);
    assert!(v["error"].as_str().unwrap().contains("resource limit"));
    let out = Command::new(env!("CARGO_BIN_EXE_chainrep"))
        .args(["mindim", "--formula", "x<y", "--format", "json"])
        .env("CHAINREP_BUDGET_MB", "1")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["budget_mb"], 1);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["growth", "--formula", "P1(x) & P1(y) & x<y", "--n", "3", "--max-len", "6", "--format", "json"];
    let a = chainrep(&args);
    let b = chainrep(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn erratum_note_accompanies_eliminations() {
    let (_, v) = json(&["mindim", "--formula", "P1(x) & P1(y) & x<y & ~ex z. (x<z & z<y & P1(z))"]);
    assert_eq!(v["result"]["dimension"], 1);
    assert_eq!(v["erratum_notes"].as_array().unwrap().len(), 1);
    let (_, v) = json(&["mindim", "--formula", "x<y"]);
    assert!(v["erratum_notes"].as_array().unwrap().is_empty());
}

#[test]
fn growth_sandwich_for_ordered_pairs() {
    let (code, v) = json(&["growth", "--formula", "x<y", "--n", "3", "--max-len", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["growth"]["degree"], 2);
    let brute: Vec<u64> = v["result"]["growth"]["samples"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["brute"].as_u64().unwrap())
        .collect();
    assert_eq!(brute, [0, 1, 3]);
}

#[test]
fn witness_lists_all_constructions() {
    let (code, v) = json(&["witness", "--n", "2", "--formula", "P1(x)"]);
    assert_eq!(code, 0);
    for kind in ["pump", "no_decrement", "growth_lower"] {
        assert!(v["result"][kind]["tuple_count"].as_u64().unwrap() >= 2, "{kind}");
    }
    let (_, v) = json(&["witness", "--n", "2", "--formula", "~ex y. y<x"]);
    assert!(v["result"]["pump"]["not_applicable"].is_string());
}

#[test]
fn monoid_and_normalform_dumps() {
    let (_, v) = json(&["monoid", "--formula", "x<y"]);
    let size = v["result"]["monoid"]["size"].as_u64().unwrap() as usize;
    assert_eq!(v["result"]["monoid"]["table"].as_array().unwrap().len(), size);
    let (code, v) = json(&["normalform", "--formula", "x<y"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["disjunct_count"], "2");
    assert_eq!(chainrep(&["normalform", "--formula", "true"]).status.code(), Some(2));
}

#[test]
fn oracle_check_sweep() {
    let (code, v) = json(&["oracle-check", "--formula", "x<y & y<z", "--max-len", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["check"]["ok"], true);
}

#[test]
fn interp_reduce_successor_pairs() {
    let (code, v) = json(&["interp-reduce", &data("successor.interp")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["dimension"], 1);
    assert_eq!(v["result"]["equivalence"]["ok"], true);
    let (code, _) = json(&["interp-reduce", &data("successor.interp"), "--dim", "0"]);
    assert_eq!(code, 1);
    let out = chainrep(&["interp-reduce", &data("broken.interp")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("broken.interp:3"));
}

#[test]
fn human_format_leads_with_summary() {
    let out = chainrep(&["mindim", "--formula", "x<y & y<z"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("minimal dimension 3"), "{text}");
}

#[test]
fn selftest_passes() {
    let (code, v) = json(&["selftest"]);
    assert_eq!(code, 0, "{}", v["summary"]);
    assert_eq!(v["result"]["passed"], true);
    assert_eq!(v["config"]["seed"], 1);
}
