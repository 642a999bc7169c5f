use std::process::{Command, Output};

use ciwidth::cli::{SizingOutput, VerifyOutput};
use ciwidth::Error;

fn ciwidth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ciwidth"))
        .args(args)
        .env_remove("CIWIDTH_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn normal_text_output() {
    let o = ciwidth(&["normal", "--sigma", "1", "--width", "0.5", "--alpha", "0.05", "--power", "0.8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("expected=62 exact=73"), "{text}");
    assert!(text.contains("width_at_expected="));
}

#[test]
fn binomial_json() {
    let o = ciwidth(&["binomial", "--p0", "0.25", "--width", "0.1", "--power", "0.9", "--json"]);
    assert!(o.status.success());
    let doc: SizingOutput = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc.result.n_expected, 286);
    assert_eq!(doc.result.n_exact, 309);
    let again = serde_json::to_string_pretty(&doc).unwrap();
    assert_eq!(again.trim_end(), stdout(&o).trim_end());
}

#[test]
fn poisson_json_has_family_tag() {
    let o = ciwidth(&["poisson", "--rate", "0.02", "--width", "0.002", "--power", "0.9", "--json"]);
    assert!(o.status.success());
    let value: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(value["design"]["family"]["poisson"]["rate"], 0.02);
    assert_eq!(value["n_exact"], 80315);
}

#[test]
fn verify_is_reproducible() {
    let args = ["verify", "--family", "normal", "--sigma", "1", "--n", "73", "--width", "0.5", "--nsim", "4000", "--seed", "11"];
    let a = ciwidth(&args);
    let b = ciwidth(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("nsim=4000 seed=11\n"));
}

#[test]
fn seed_from_environment() {
    let base = ["verify", "--family", "binomial", "--p0", "0.25", "--n", "302", "--width", "0.1", "--nsim", "3000", "--json"];
    let from_env = Command::new(env!("CARGO_BIN_EXE_ciwidth")).args(base).env("CIWIDTH_SEED", "42").output().unwrap();
    let mut explicit: Vec<&str> = base.to_vec();
    explicit.extend(["--seed", "42"]);
    let from_flag = ciwidth(&explicit);
    assert_eq!(from_env.stdout, from_flag.stdout);
    let doc: VerifyOutput = serde_json::from_slice(&from_env.stdout).unwrap();
    assert_eq!(doc.report.seed, 42);
    assert_eq!(doc.n, 302);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(ciwidth(&["normal", "--sigma", "1", "--width", "0.5", "--alpha", "1.5"]).status.code(), Some(2));
    assert_eq!(ciwidth(&["binomial", "--p0", "1.2", "--width", "0.1"]).status.code(), Some(2));
    assert_eq!(ciwidth(&["frobnicate"]).status.code(), Some(2));
    let o = ciwidth(&["verify", "--family", "normal", "--width", "0.5", "--n", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--sigma"));
}

#[test]
fn help_exits_0() {
    let o = ciwidth(&["--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("verify"));
}

#[test]
fn exit_code_mapping() {
    use ciwidth::ciwidth_core::Error as Core;
    assert_eq!(Error::from(Core::Domain("x")).exit_code(), 2);
    assert_eq!(Error::from(Core::NoConvergence("x")).exit_code(), 3);
    assert_eq!(Error::from(Core::SearchExhausted { evaluations: 1 }).exit_code(), 3);
    assert_eq!(Error::Config("x".into()).exit_code(), 2);
}

#[test]
fn table_command_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = ciwidth(&["table", "3", "--depth", "1", "--nsim", "500", "--out-dir", d]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("table3.csv")).unwrap();
    assert!(csv.starts_with("family,param,width0,conf_level,power_target,n_expected"));
    assert_eq!(csv.lines().count(), 9);
    assert!(dir.path().join("table3.md").exists());
}
