use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_detdeform"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn temp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("detdeform-cli-{}-{name}", std::process::id()))
}

#[test]
fn trivial_fixture_is_rigid() {
    let out = run(&["analyze", fixture("trivial.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rep = stdout_json(&out);
    assert_eq!(rep["verdict"], "Rigid");
    let psi = rep["psi"]["psi"].as_array().unwrap();
    let got: Vec<i64> = psi.iter().map(|e| e[0].as_i64().unwrap()).collect();
    assert_eq!(got, vec![0, 1, 2, 0, 1, 2, 3, 1]);
}

#[test]
fn principal_minor_fixture_is_not_integrable() {
    let out = run(&["analyze", fixture("principal_minor.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["verdict"], "NonIntegrableWitness");
}

#[test]
fn malformed_input_exits_one() {
    let path = temp("bad.json");
    std::fs::write(&path, "{\"vars\": [").unwrap();
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
    assert!(out.stdout.is_empty());
    let out = run(&["analyze", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn generation_is_deterministic() {
    let a = run(&["gen", "principal-minor", "--k", "6", "--seed", "42"]);
    let b = run(&["gen", "principal-minor", "--k", "6", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["gen", "principal-minor", "--k", "6", "--seed", "43"]);
    assert_ne!(a.stdout, c.stdout);
    let doc = stdout_json(&a);
    assert_eq!(doc["provenance"]["family"], "principal-minor");
    assert_eq!(doc["provenance"]["seed"], 42);
}

#[test]
fn weak_keys_document_analyzes_to_witness() {
    let path = temp("weak.json");
    let out = run(&["gen", "weak-keys", "--k", "5", "--p", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let out = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn odd_type_document_carries_the_h_list() {
    let out = run(&["gen", "odd-type", "--c", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!((doc["k"].as_u64(), doc["n"].as_u64()), (Some(3), Some(7)));
    // Row 5 of R is (1, −c, −c(ξ+1)) with c = 2 and ξ = 2t.
    let entry = &doc["R"][4][2];
    let mut terms: Vec<(String, i64)> =
        entry.as_array().unwrap().iter().map(|t| (t["c"].as_str().unwrap().to_string(), t["e"][0].as_i64().unwrap())).collect();
    terms.sort();
    assert_eq!(terms, vec![("-2".to_string(), 0), ("-4".to_string(), 1)]);
    assert_eq!(run(&["gen", "odd-type", "--c", "0"]).status.code(), Some(1));
}

#[test]
fn psi_and_canonical_commands() {
    let f = fixture("trivial.json");
    let out = run(&["psi", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["m0"][0], 0);
    let out = run(&["canonical", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["provenance"]["canonical"]["basis"], serde_json::json!([1, 2, 3]));
    let out = run(&["canonical", fixture("principal_minor.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn replication_suite_passes() {
    let out = run(&["verify-appendix"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 15);
}
