//! Golden tests for the command-line interface: output schema stability,
//! documented example commands, exit codes, and determinism.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_copula-tails"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "invalid JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn classify_gumbel_json_schema() {
    let out = run(&["classify", "--gen", "family:4,theta:2", "--format", "json"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["family"], 4);
    assert_eq!(v["theta"], 2.0);
    assert_eq!(v["upper"]["case"], 3);
    assert_eq!(v["upper"]["theta1"], 2.0);
    assert_eq!(v["lower"]["case"], 5);
    assert_eq!(v["lower"]["kappa"], 0.5);
    assert_eq!(v["lower"]["phi0"], "inf");
    assert!(v["diagnostics"].is_array());
}

#[test]
fn coefs_clayton_lambda_l() {
    let out = run(&["coefs", "--gen", "family:1,theta:2", "--format", "json"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let l = v["lambda_L"].as_f64().unwrap();
    assert!((l - 0.70711).abs() < 1e-5, "lambda_L = {l}");
    assert_eq!(v["lambda_U"], 0.0);
}

#[test]
fn eval_independence_cdf() {
    let out = run(&["eval", "--gen", "family:1,theta:0", "--cdf", "0.5,0.5"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "0.25");
}

#[test]
fn eval_rectangle_json() {
    let out = run(&[
        "eval",
        "--gen",
        "family:1,theta:0",
        "--x",
        "0,0",
        "--y",
        "0.5,0.5",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!((v["value"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(v["cancellation_flag"], false);
}

#[test]
fn parse_error_exits_2() {
    let out = run(&["classify", "--gen", "family:99,theta:1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["eval", "--gen", "family:1,theta:1", "--cdf", "zebra"]);
    assert_eq!(out.status.code(), Some(2));
    // clap-level argument errors share the same status.
    let out = run(&["classify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cancellation_limited_eval_exits_3() {
    // Deep survival rectangle where the alternating sum loses all digits.
    let out = run(&[
        "eval",
        "--gen",
        "family:5,theta:1",
        "--x",
        "0.999999999999,0.999999999999",
        "--y",
        "1,1",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert_eq!(v["cancellation_flag"], true);
}

#[test]
fn verify_pass_and_wrong_case() {
    let out = run(&[
        "verify",
        "--gen",
        "family:4,theta:2",
        "--theorem",
        "upper-ad",
        "--subset",
        "1,2",
        "--x",
        "1,1",
        "--tolerance",
        "1e-3",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "pass");
    assert!((v["predicted"].as_f64().unwrap() - (2.0 - 2f64.sqrt())).abs() < 1e-12);

    // A generator in the wrong case for the requested statement.
    let out = run(&[
        "verify",
        "--gen",
        "family:1,theta:2",
        "--theorem",
        "upper-ad",
        "--subset",
        "1,2",
        "--x",
        "1,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn limit_formula_value() {
    let out = run(&[
        "limit",
        "--gen",
        "family:1,theta:2",
        "--theorem",
        "lower-ad",
        "--subset",
        "1,2",
        "--x",
        "1,1",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!((v["formula_value"].as_f64().unwrap() - 2f64.powf(-0.5)).abs() < 1e-12);
    assert_eq!(v["scenario"]["theorem"], "lower-ad");
    assert!(v["scaling_descriptor"].is_string());
}

#[test]
fn sample_is_deterministic() {
    let args = [
        "sample",
        "--gen",
        "family:1,theta:1",
        "--n",
        "50",
        "--seed",
        "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same seed must reproduce byte-identical output");

    let c = run(&[
        "sample",
        "--gen",
        "family:1,theta:1",
        "--n",
        "50",
        "--seed",
        "8",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn transformed_spec_round_trip() {
    let out = run(&[
        "classify",
        "--gen",
        "family:5,theta:1,transform:1,alpha:2",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    // Power transform lifts theta1 from 1 to alpha, giving upper-tail
    // asymptotic dependence.
    assert_eq!(v["upper"]["case"], 3);
    assert_eq!(v["upper"]["theta1"], 2.0);
}

#[test]
fn table_reports_run_clean() {
    let out = run(&["table2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("label,ok,mismatches"));
    assert_eq!(text.lines().count(), 13); // header + 12 rows
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")));
}
