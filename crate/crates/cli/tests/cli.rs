use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpdcolim")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

/// Writes a built-in example to a temporary file and returns its path.
fn example(name: &str) -> PathBuf {
    let o = run(&["example", name]);
    assert_eq!(o.status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("gpdcolim-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, &o.stdout).unwrap();
    path
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).expect("JSON envelope"))
}

#[test]
fn s1_compare_is_guaranteed() {
    let f = example("s1");
    let o = run(&["compare", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("GuaranteedEquivalent"), "{out}");
    assert!(out.contains("free rank 1"), "{out}");
}

#[test]
fn s0_collapse_compare_is_distinguished() {
    let f = example("s0-collapse");
    let (code, v) = json(&["compare", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["command"], "compare");
    assert_eq!(v["exit_code"], 1);
    assert!(v["fuel_spent"].is_u64());
    assert!(v["unknowns"].is_array());
    assert_eq!(v["status"], "refuted");
    assert_eq!(v["report"]["comparison"]["verdict"]["kind"], "distinguished");
}

#[test]
fn s1_reduced_battery_has_one_condition() {
    let f = example("s1");
    let (code, v) = json(&["conditions", "--maincor", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["battery"]["reports"].as_array().unwrap().len(), 1);
}

#[test]
fn s0_collapse_conditions_fail() {
    let f = example("s0-collapse");
    let o = run(&["conditions", "--full", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn presentations_have_expected_sizes() {
    let f = example("s1");
    let (code, v) = json(&["twocolim", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let p = &v["report"]["two_colimit"];
    assert_eq!(p["objects"].as_array().unwrap().len(), 6);
    assert_eq!(p["generators"].as_array().unwrap().len(), 6);
    assert!(p["relations"].as_array().unwrap().is_empty());

    let (code, v) = json(&["colim", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["colimit"]["objects"].as_array().unwrap().len(), 2);
}

#[test]
fn validate_reports_strictness() {
    let f = example("s1");
    let (code, v) = json(&["validate", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["strictness"]["verified"], true);
}

#[test]
fn malformed_input_is_a_usage_error() {
    let o = run(&["validate", data("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing entry"));
    let o = run(&["colim", "/nonexistent/diagram.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_counts_agree() {
    let f = example("s1");
    let (code, v) = json(&["oracle", f.to_str().unwrap(), "--target", data("z2.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = &v["report"];
    assert_eq!(r["colimit_functors"], 4);
    assert_eq!(r["cones"], 4);
    assert_eq!(r["descent"], r["two_colimit_functors"]);
}

#[test]
fn truncation_and_gamma_on_three_points() {
    let f = data("b3-point.json");
    let o = run(&["truncate-check", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let (code, v) = json(&["gamma-k", f.to_str().unwrap(), "--k", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"]["gamma_k"]["essentially_surjective"], true);
}

#[test]
fn truncation_rejects_small_ground_set() {
    let f = example("s1");
    let o = run(&["truncate-check", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn injectivize_fixes_s0_collapse() {
    let f = example("s0-collapse");
    let out = f.with_file_name("s0-injective.json");
    let o = run(&["injectivize", f.to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["compare", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("GuaranteedEquivalent"));
}

#[test]
fn fuel_starvation_is_inconclusive_or_ok() {
    let f = example("s1");
    let o = run(&["--fuel", "0", "compare", f.to_str().unwrap()]);
    assert!(matches!(o.status.code(), Some(0) | Some(3)));
}
