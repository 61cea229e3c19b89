use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    root.to_str().unwrap().to_string()
}

fn gpdact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gpdact"))
        .args(args)
        .env_remove("GPDACT_SEED")
        .output()
        .expect("binary runs")
}

/// Runs with `--format json`, checks that the exit code agrees with the report, and returns it.
fn report(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = gpdact(&full);
    let v: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\nstderr: {}", String::from_utf8_lossy(&out.stderr)));
    let pass = v["pass"].as_bool().unwrap();
    assert_eq!(out.status.code(), Some(if pass { 0 } else { 1 }), "{args:?}");
    assert_eq!(v["schema"], 1);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted, "checks sorted by name");
    v
}

fn all_pass(v: &Value) -> bool {
    v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true) && v["pass"] == true
}

#[test]
fn encrypt_z2() {
    let v = report(&["encrypt", "Z/2", "--plaintext", "1", "--key", "1"]);
    assert!(all_pass(&v));
    assert_eq!(v["details"]["ciphertext"], "δ(0)");
    assert_eq!(v["details"]["heat"], "1");
    assert_eq!(v["details"]["landauer"]["heat_equals_key"], true);
}

#[test]
fn axioms_on_fixture_file() {
    let v = report(&["check-axioms", &fixture("two_bits.json")]);
    assert!(all_pass(&v));
    assert_eq!(v["details"]["morphisms"], 4);
    assert_eq!(v["checks"].as_array().unwrap().len(), 7);
}

#[test]
fn validate_every_fixture() {
    let g = report(&["validate", &fixture("two_bits.json")]);
    assert_eq!(g["details"]["kind"], "groupoid");
    assert_eq!(g["details"]["objects"], 2);
    let s = report(&["validate", &fixture("z2_identity_span.json")]);
    assert_eq!(s["details"]["kind"], "span");
    assert_eq!(s["details"]["unitary"], true);
}

#[test]
fn quantize_identity_span() {
    let v = report(&["quantize", &fixture("z2_identity_span.json")]);
    assert!(all_pass(&v));
    assert!(v["details"]["matrix"].is_string());
}

#[test]
fn teleport_basis_state() {
    let v = report(&["teleport", "2", "--state", "1,0"]);
    assert!(all_pass(&v));
    let branches = v["details"]["branches"].as_array().unwrap();
    assert_eq!(branches.len(), 4);
    for b in branches {
        assert!((b["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert!((b["probability"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    }
}

#[test]
fn group_commands_pass() {
    for args in [
        vec!["check-complementary", "S3"],
        vec!["check-communication", "Z/3"],
        vec!["build-lambda", "Z/2"],
        vec!["distribution", "Z/4", "--plaintext", "2"],
        vec!["decohere", "Z/3", "--trials", "20"],
        vec!["check-q", "Z/3"],
        vec!["check-mub", "5"],
        vec!["dense-code", "3"],
        vec!["dense-code-span", "V4"],
        vec!["suite"],
    ] {
        assert!(all_pass(&report(&args)), "{args:?}");
    }
}

#[test]
fn same_seed_same_bytes() {
    let a = gpdact(&["--format", "json", "check-q", "S3", "--seed", "7"]);
    let b = gpdact(&["--format", "json", "check-q", "S3", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_gpdact"))
        .args(["--format", "json", "check-q", "S3"])
        .env("GPDACT_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    let d = gpdact(&["--format", "json", "teleport", "3", "--seed", "8"]);
    let e = gpdact(&["--format", "json", "teleport", "3", "--seed", "8"]);
    assert_eq!(d.stdout, e.stdout);
}

#[test]
fn different_inputs_different_digest() {
    let a = report(&["encrypt", "Z/3", "--plaintext", "1", "--key", "2"]);
    let b = report(&["encrypt", "Z/3", "--plaintext", "2", "--key", "1"]);
    assert_ne!(a["inputs_digest"], b["inputs_digest"]);
}

#[test]
fn usage_and_input_errors_exit_2() {
    let nonnatural = std::env::temp_dir().join(format!("gpdact-nonnatural-{}.json", std::process::id()));
    let text = std::fs::read_to_string(fixture("z2_identity_span.json"))
        .unwrap()
        .replace(r#"{"s": "1", "t": "1", "multiplicity": 1}"#, r#"{"s": "1", "t": "1", "multiplicity": 2}"#);
    std::fs::write(&nonnatural, text).unwrap();
    let nonnatural = nonnatural.to_str().unwrap().to_string();
    for args in [
        vec!["no-such-command"],
        vec!["encrypt", "Z/2", "--plaintext", "1"],
        vec!["check-axioms", "Z/99"],
        vec!["encrypt", "Z/2", "--plaintext", "5", "--key", "0"],
        vec!["teleport", "2", "--state", "1,1"],
        vec!["teleport", "2", "--state", "1,0", "--seed", "3"],
        vec!["quantize", &nonnatural],
        vec!["validate", "/no/such/file.json"],
    ] {
        let out = gpdact(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    let _ = std::fs::remove_file(&nonnatural);
}

#[test]
fn bad_seed_env_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_gpdact")).args(["check-q", "Z/2"]).env("GPDACT_SEED", "x").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_format_summary_line() {
    let out = gpdact(&["check-mub", "3"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().last().unwrap().starts_with("overall: PASS"), "{s}");
}

#[test]
fn timings_are_opt_in() {
    let plain = report(&["check-mub", "3"]);
    assert!(plain["checks"][0].get("timing_ms").is_none());
    let timed = report(&["--timings", "check-mub", "3"]);
    assert!(timed["checks"][0].get("timing_ms").is_some());
}
