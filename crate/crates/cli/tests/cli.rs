//! End-to-end tests against the built binary: worked pairs, certificate
//! round trips through check-cert, exit-code conventions, and output
//! byte-stability.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_liekolchin"))
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path.display().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

const A_GOOD: &str = r#"{"dim": 2, "entries": [["1","2"],["0","1"]]}"#;
const A_BAD: &str = r#"{"dim": 2, "entries": [["1","0"],["1","1"]]}"#;
const B_BLOCK: &str = r#"{"dim": 2, "entries": [["1","1"],["0","1"]]}"#;

#[test]
fn verify_certifies_and_check_cert_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", A_GOOD);
    let b = write(dir.path(), "b.json", B_BLOCK);
    let doc = dir.path().join("verdict.json");

    let output = run(&["verify", "--a", &a, "--b", &b, "--out", doc.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));

    let parsed: serde_json::Value = serde_json::from_str(&fs::read_to_string(&doc).unwrap()).unwrap();
    assert_eq!(parsed["verdict"]["status"], "hypotheses-hold-certified");
    assert_eq!(
        parsed["verdict"]["cert"]["common_eigenvector"],
        serde_json::json!(["1", "0"])
    );

    let recheck = run(&["check-cert", "--cert", doc.to_str().unwrap()]);
    assert_eq!(recheck.status.code(), Some(0));
    assert_eq!(stdout_json(&recheck)["valid"], true);
}

#[test]
fn verify_witnesses_failure_and_check_cert_reproduces_traces() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", A_BAD);
    let b = write(dir.path(), "b.json", B_BLOCK);
    let doc = dir.path().join("verdict.json");

    let output = run(&["verify", "--a", &a, "--b", &b, "--out", doc.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));

    let parsed: serde_json::Value = serde_json::from_str(&fs::read_to_string(&doc).unwrap()).unwrap();
    assert_eq!(parsed["verdict"]["status"], "hypotheses-fail-witnessed");
    let witness = &parsed["verdict"]["report"]["witness"];
    assert_eq!(witness["k"], 1);
    assert_eq!(witness["t1"], "2");
    assert_eq!(witness["t2"], "3");

    let recheck = run(&["check-cert", "--cert", doc.to_str().unwrap()]);
    assert_eq!(recheck.status.code(), Some(0));
}

#[test]
fn tampered_certificate_fails_revalidation() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", A_GOOD);
    let b = write(dir.path(), "b.json", B_BLOCK);
    let doc = dir.path().join("verdict.json");
    run(&["verify", "--a", &a, "--b", &b, "--out", doc.to_str().unwrap()]);

    let mut parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&doc).unwrap()).unwrap();
    parsed["verdict"]["cert"]["common_eigenvector"] = serde_json::json!(["0", "1"]);
    fs::write(&doc, serde_json::to_string(&parsed).unwrap()).unwrap();

    let recheck = run(&["check-cert", "--cert", doc.to_str().unwrap()]);
    assert_eq!(recheck.status.code(), Some(1));
    assert_eq!(stdout_json(&recheck)["valid"], false);
}

#[test]
fn precondition_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"dim": 2, "entries": [[2,0],[0,1]]}"#);
    let b = write(dir.path(), "b.json", B_BLOCK);
    let output = run(&["verify", "--a", &a, "--b", &b]);
    assert_eq!(output.status.code(), Some(2));
    let parsed = stdout_json(&output);
    assert_eq!(parsed["verdict"]["status"], "precondition-failure");
    assert_eq!(parsed["verdict"]["reason"], "non-quasi-unipotent-a");
}

#[test]
fn parse_error_exits_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"dim\": 2,\n  \"entries\": [[1,2],\n");
    let output = run(&["index", "--matrix", &bad]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("line"), "no position in: {stderr}");
}

#[test]
fn pk_table_matches_worked_example() {
    let output = run(&[
        "pk", "--r", "1", "--m", "1", "--x", "1,-1", "--kmax", "3", "--format", "tsv",
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&output.stdout),
        "k\tp_k\n1\t0\n2\t1\n3\t0\n"
    );
}

#[test]
fn pascal_factor_product_verified() {
    let output = run(&["pascal", "--n", "3", "--factor"]);
    assert_eq!(output.status.code(), Some(0));
    let parsed = stdout_json(&output);
    assert_eq!(parsed["product_matches"], true);
    assert_eq!(parsed["factors"].as_array().unwrap().len(), 3);
    assert_eq!(
        parsed["matrix"]["entries"],
        serde_json::json!([["1", "0", "0"], ["1", "1", "0"], ["1", "2", "1"]])
    );
}

#[test]
fn minor_positivity_emits_verified_chain() {
    let output = run(&["minor-positivity", "--qs", "2,3,4", "--r", "1"]);
    assert_eq!(output.status.code(), Some(0));
    let parsed = stdout_json(&output);
    assert_eq!(parsed["det"], "4");
    assert_eq!(parsed["cert"]["n"], 6);

    let bad = run(&["minor-positivity", "--qs", "3,2", "--r", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn index_reports_bottom_for_zero_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(
        dir.path(),
        "zero.json",
        r#"{"dim": 2, "entries": [[0,0],[0,0]]}"#,
    );
    let output = run(&["index", "--matrix", &zero]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout_json(&output)["index"], "bottom");
}

#[test]
fn tnn_cap_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let entries: Vec<Vec<i64>> = (0..7)
        .map(|i| (0..7).map(|j| i64::from(i == j)).collect())
        .collect();
    let m = serde_json::json!({"dim": 7, "entries": entries});
    let path = write(dir.path(), "id7.json", &m.to_string());
    let output = run(&["tnn", "--matrix", &path]);
    assert_eq!(output.status.code(), Some(3));

    let raised = bin()
        .args(["tnn", "--matrix", &path])
        .env("LIEKOLCHIN_TNN_CAP", "8")
        .output()
        .unwrap();
    assert_eq!(raised.status.code(), Some(0));
}

#[test]
fn commutator_check_on_heisenberg_triple() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(
        dir.path(),
        "x.json",
        r#"{"dim": 3, "entries": [[1,1,0],[0,1,0],[0,0,1]]}"#,
    );
    let y = write(
        dir.path(),
        "y.json",
        r#"{"dim": 3, "entries": [[1,0,0],[0,1,1],[0,0,1]]}"#,
    );
    let g = write(
        dir.path(),
        "g.json",
        r#"{"dim": 3, "entries": [[1,0,1],[0,1,0],[0,0,1]]}"#,
    );
    let output = run(&["commutator-check", "--g", &g, "--xs", &x, "--ys", &y]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout_json(&output)["quasi_unipotent"], true);

    // violated product relation is an error, exit 2
    let bad = run(&["commutator-check", "--g", &g, "--xs", &x, "--ys", &x]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn trace_poly_cross_checks_methods() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", A_BAD);
    let b = write(dir.path(), "b.json", B_BLOCK);
    let output = run(&["trace-poly", "--a", &a, "--b", &b, "--k", "1"]);
    assert_eq!(output.status.code(), Some(0));
    let parsed = stdout_json(&output);
    assert_eq!(parsed["agree"], true);
    assert_eq!(parsed["expanded"]["coeffs"], serde_json::json!(["2", "1"]));
}

#[test]
fn outputs_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", A_GOOD);
    let b = write(dir.path(), "b.json", B_BLOCK);
    let first = run(&["verify", "--a", &a, "--b", &b]);
    let second = run(&["verify", "--a", &a, "--b", &b]);
    assert_eq!(first.stdout, second.stdout);
}
