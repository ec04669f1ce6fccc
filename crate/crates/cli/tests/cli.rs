use std::process::{Command, Output};

use serde_json::Value;

fn intuit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intuit")).args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = intuit(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("intuit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn check_toy() {
    let v = ok_json(&["check", "rho[2]", "--structure", r#"{"variant":"toy","n":3}"#]);
    assert_eq!(v, serde_json::json!({"verdict": "holds"}));
    let v = ok_json(&["check", "rho[1]", "--structure", r#"{"variant":"toy","n":3}"#]);
    assert_eq!(v["verdict"], "neg_holds");
}

#[test]
fn oracle_check_agrees() {
    let v = ok_json(&["oracle-check", "psi[2,2] & ~psi[2,3]", "--structure", r#"{"variant":"product","n":2,"m":3}"#]);
    assert_eq!(v["verdict"], "holds");
}

#[test]
fn oracle_too_shallow_is_a_domain_error() {
    let out = intuit(&["oracle-check", "psi[9]", "--structure", r#"{"variant":"toy","n":10}"#, "--depth", "12"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn normalize() {
    assert_eq!(ok_json(&["normalize", "--s", "1,3,3,2"]), serde_json::json!({"n": 2, "m": 3}));
    assert!(ok_json(&["normalize", "--s", "2,1", "--witness"])["witness"].is_object());
}

#[test]
fn qe() {
    assert_eq!(ok_json(&["qe", "exists x forall y (x=y)"]), serde_json::json!({"value": false}));
    assert_eq!(ok_json(&["qe", "psi_card[3]"]), serde_json::json!({"value": true}));
}

#[test]
fn classify() {
    let v = ok_json(&["classify", "--n", "4", "--point", r#"{"jumps":[[2,3]]}"#]);
    assert_eq!(v["order"], 0);
    assert_eq!(v["isolated"], true);
}

#[test]
fn distinguish_reports_failure_to_separate() {
    let v = ok_json(&[
        "distinguish",
        "--zeta",
        r#"{"values":[2,3,5],"period_increments":[1]}"#,
        "--eta",
        r#"{"values":[2,4,5],"period_increments":[1]}"#,
        "--depth",
        "8",
    ]);
    assert_eq!(v["sentence"], "rho[2]");
    assert_eq!(v["confirmed"], false);
}

#[test]
fn vitali_commands() {
    let v = ok_json(&["vitali", "decide", "(tower 2)", r#"{"pre":[1],"period":[0]}"#, r#"{"period":[0]}"#]);
    assert_eq!(v["value"], true);
    let v = ok_json(&["vitali", "decide", "(almost)", r#"{"period":[0,1]}"#, r#"{"period":[0]}"#]);
    assert_eq!(v["value"], false);
    let v = ok_json(&["vitali", "fan", "(plus (union (base)))", "--depth", "8"]);
    assert_eq!(v["fan"], true);
    assert_eq!(v["validation"]["spread_violations"], serde_json::json!([]));
    let v = ok_json(&["vitali", "embed", "(plus (base))"]);
    assert_eq!(v["expr"], "(plus (union (base)))");
    assert_eq!(intuit(&["vitali", "fan", "(tower 1)"]).status.code(), Some(1));
    assert_eq!(intuit(&["vitali", "decide", "(plus", "{}", "{}"]).status.code(), Some(1));
}

#[test]
fn refute_and_verify_round_trip() {
    let script = tmp("strategy.json");
    std::fs::write(&script, r#"{"default":{"p":2,"n":2},"omega:0":{"p":1,"n":1}}"#).unwrap();
    for name in [
        "equality-decidability",
        "vitali-stability",
        "apartness",
        "tower-collapse",
        "omega-stability",
        "fin-containment",
        "decidability-on-omega-class",
    ] {
        let out = intuit(&["refute", name, "--strategy", script.to_str().unwrap()]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stderr).contains("contradiction"));
        let path = tmp(&format!("{name}.json"));
        std::fs::write(&path, &out.stdout).unwrap();
        assert_eq!(ok_json(&["verify", path.to_str().unwrap()])["valid"], true, "{name}");
    }
}

#[test]
fn tampered_transcript_is_rejected() {
    let out = intuit(&["refute", "vitali-stability", "--modulus", "3,5"]);
    let mut t: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(t["steps"][0]["point"]["pre"], serde_json::json!([0, 0, 0, 0, 0, 0, 1]));
    t["steps"][0]["point"]["pre"][6] = 2.into();
    let path = tmp("tampered.json");
    std::fs::write(&path, t.to_string()).unwrap();
    assert_eq!(ok_json(&["verify", path.to_str().unwrap()])["valid"], false);
    t["schema_version"] = 9.into();
    std::fs::write(&path, t.to_string()).unwrap();
    assert_eq!(intuit(&["verify", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn strategy_needs_default() {
    let script = tmp("nodefault.json");
    std::fs::write(&script, r#"{"tower":{"p":2,"n":2}}"#).unwrap();
    let out = intuit(&["refute", "tower-collapse", "--strategy", script.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn seeded_runs_are_reproducible() {
    let a = intuit(&["--seed", "7", "refute", "omega-stability"]);
    let b = intuit(&["--seed", "7", "refute", "omega-stability"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn validate_law() {
    let v = ok_json(&["validate-law", r#"{"kind":"builtin","family":"toy","n":3}"#, "--depth", "5"]);
    assert_eq!(v["valid"], true);
    let v = ok_json(&["validate-law", r#"{"kind":"table","accept":[[],[0],[1]],"default":"reject-extensions"}"#, "--depth", "3"]);
    assert_eq!(v["valid"], false);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(intuit(&["bogus"]).status.code(), Some(2));
    assert_eq!(intuit(&["check", "rho[2]"]).status.code(), Some(2));
    assert_eq!(intuit(&["normalize"]).status.code(), Some(2));
}

#[test]
fn every_subcommand_has_help() {
    for sub in [
        "check",
        "oracle-check",
        "distinguish",
        "normalize",
        "classify",
        "qe",
        "vitali",
        "refute",
        "verify",
        "validate-law",
    ] {
        let out = intuit(&[sub, "--help"]);
        assert!(out.status.success(), "{sub}");
        assert!(String::from_utf8_lossy(&out.stdout).contains("Usage"), "{sub}");
    }
}
