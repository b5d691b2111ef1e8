use std::process::{Command, Output};

use serde_json::Value;

fn weakf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weakf"))
        .args(args)
        .env_remove("WEAKF_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn entry<'a>(report: &'a Value, suite: &str, id: &str) -> &'a Value {
    report["suites"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["suite"] == suite)
        .and_then(|s| s["entries"].as_array().unwrap().iter().find(|e| e["id"] == id))
        .unwrap_or_else(|| panic!("no {suite}/{id}"))
}

#[test]
fn passing_example_exits_zero() {
    let out = weakf(&["verify", "--example", "flat_pack", "--samples", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["overall"], "pass");
    assert_eq!(r["config"]["seed"], 42);
    assert_eq!(r["config"]["samples"], 5);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["verify", "--example", "nope"],
        vec!["verify", "--example", "flat_pack", "--param", "n"],
        vec!["verify", "--example", "flat_pack", "--param", "bogus=1"],
        vec!["verify", "--example", "flat_pack", "--suites", "axioms,nope"],
        vec!["verify", "--example", "flat_pack", "--samples", "0"],
        vec!["verify", "--example", "flat_pack", "--tol-exact", "-1"],
        vec!["verify", "--example", "rotated_pack", "--param", "n=1", "--param", "rotation=reflect", "--param", "t=0.7853981633974483"],
        vec!["verify", "--example", "hypersphere", "--param", "ambient_lambda=2"],
        vec!["verify"],
        vec!["frobnicate"],
    ] {
        let out = weakf(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn failing_claim_exits_one() {
    // tolerances far below round-off make a claimed class fail
    let out = weakf(&["verify", "--example", "sasakian_s3", "--samples", "3", "--tol-exact", "0", "--suites", "axioms"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["overall"], "fail");
}

#[test]
fn seed_comes_from_flag_then_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_weakf"))
        .args(["verify", "--example", "flat_pack", "--samples", "2", "--suites", "axioms"])
        .env("WEAKF_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(json(&out)["config"]["seed"], 7);
    let out = Command::new(env!("CARGO_BIN_EXE_weakf"))
        .args(["verify", "--example", "flat_pack", "--samples", "2", "--suites", "axioms", "--seed", "9"])
        .env("WEAKF_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(json(&out)["config"]["seed"], 9);
    let out = Command::new(env!("CARGO_BIN_EXE_weakf"))
        .args(["verify", "--example", "flat_pack"])
        .env("WEAKF_SEED", "seven")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn product_pack_is_nearly_c_but_not_almost_s() {
    let out = weakf(&[
        "verify", "--example", "product_pack", "--param", "n=1", "--param", "s=2", "--suites", "classes", "--samples", "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let nearly_c = entry(&r, "classes", "weak_nearly_C");
    assert_eq!(nearly_c["verdict"], "pass");
    assert_eq!(nearly_c["role"], "check");
    let almost_s = entry(&r, "classes", "weak_almost_S");
    assert_eq!(almost_s["role"], "info");
    assert!(almost_s["max"].as_f64().unwrap() >= 0.5);
}

#[test]
fn gated_theorem_is_skipped_with_its_gate() {
    let out = weakf(&["verify", "--example", "sasakian_s3", "--suites", "theorems", "--samples", "3"]);
    let r = json(&out);
    let e = entry(&r, "theorems", "thm41");
    assert_eq!(e["verdict"], "skipped: hypothesis failed");
    assert!(e["gate"].as_str().unwrap().contains("nearly C"));
    assert!(e["gate_residual"].as_f64().unwrap() > 0.1);
}

#[test]
fn submanifold_suite_not_applicable_on_packs() {
    let out = weakf(&["verify", "--example", "sasakian_s3", "--suites", "submanifold", "--samples", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let s = &r["suites"][0];
    assert_eq!(s["suite"], "submanifold");
    assert_eq!(s["applicable"], false);
    assert!(s["reason"].is_string());
}

#[test]
fn text_report_and_out_file() {
    let dir = std::env::temp_dir().join(format!("weakf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    let out = weakf(&[
        "verify", "--example", "hypersphere", "--samples", "3", "--format", "text", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("[submanifold]"));
    assert!(text.trim_end().ends_with("overall  PASS"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn examples_lists_the_catalog() {
    let out = weakf(&["examples"]);
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<String> = String::from_utf8(out.stdout).unwrap().lines().map(str::to_owned).collect();
    assert!(names.contains(&"sasakian_s3".to_owned()));
    assert_eq!(names.len(), 7);
}
