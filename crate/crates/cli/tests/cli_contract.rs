use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_uniq-regions");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env("UNIQ_REGIONS_THREADS", "2").output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)))
}

fn schema() -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/uniq-regions.schema.json")).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap();
    jsonschema::JSONSchema::compile(&value).expect("schema compiles")
}

fn assert_valid(schema: &jsonschema::JSONSchema, doc: &Value) {
    if let Err(errors) = schema.validate(doc) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("schema violations: {msgs:#?}\n{doc:#}");
    }
}

#[test]
fn exit_codes_follow_the_contract() {
    let cases: &[(&[&str], i32)] = &[
        (&["check", "--n", "3", "--s", "1/2", "--alpha", "3/2", "--scenario", "subcritical-usual"], 0),
        (&["check", "--n", "3", "--s", "1/2", "--alpha", "2", "--scenario", "subcritical-usual"], 1),
        (&["check", "--n", "3", "--s", "1/2", "--alpha", "3/4", "--scenario", "holder-usual"], 0),
        (&["check", "--n", "3", "--s", "3/4", "--alpha", "8/3", "--scenario", "critical-n3-energy"], 0),
        (&["check", "--n", "3", "--s", "1/4", "--alpha", "8/5", "--scenario", "critical-n3-energy"], 1),
        (&["check", "--n", "4", "--s", "3/10", "--alpha", "20/17", "--scenario", "critical-high-dim"], 1),
        (&["check", "--n", "3", "--s", "1/2", "--alpha", "3/4"], 0),
        (&["check", "--n", "3", "--s", "1/2", "--alpha", "3/2", "--scenario", "thm11"], 0),
        (&["check", "--n", "3", "--s", "1/2", "--alpha", "3", "--scenario", "thm11"], 1),
        (&["check", "--n", "3", "--s", "1/2", "--alpha", "1/4", "--scenario", "subcritical-usual"], 2),
        (&["check", "--n", "3", "--s", "one half", "--alpha", "1"], 2),
        (&["check", "--n", "3", "--s", "1/2", "--alpha", "1/0"], 2),
        (&["check", "--n", "3", "--s", "1/2", "--alpha", "1", "--scenario", "no-such-thing"], 2),
        (&["check", "--n", "3", "--s", "2", "--alpha", "1"], 2),
        (&["check", "--n", "3", "--s", "1/2"], 2),
        (&["sigma", "--n", "3", "--s", "1/2", "--alpha", "3/2", "--scenario", "subcritical-usual"], 0),
        (&["sigma", "--n", "3", "--s", "1/2", "--alpha", "3/2", "--scenario", "critical-high-dim"], 2),
        (&["s0", "--n", "5", "--tol", "1/1000000"], 0),
        (&["s0", "--n", "4", "--tol", "1/1000000"], 2),
        (&["s0", "--n", "5", "--tol", "0"], 2),
        (&["region", "--n", "3", "--targets", "thm11", "--step", "3/8"], 2),
        (&["region", "--n", "3", "--targets", "thm11,bogus", "--step", "1/4"], 2),
        (&["figure", "--n", "2"], 2),
        (&["verify", "--suite", "chains"], 0),
        (&["verify", "--suite", "everything"], 2),
        (&["frobnicate"], 2),
    ];
    for (args, expected) in cases {
        assert_eq!(code(args), *expected, "{args:?}");
    }
}

#[test]
fn usage_errors_name_the_offending_flag() {
    for (args, flag) in [
        (vec!["check", "--n", "3", "--s", "x/2", "--alpha", "1"], "--s"),
        (vec!["check", "--n", "3", "--s", "1/2", "--alpha", "1", "--scenario", "nope"], "--scenario"),
        (vec!["check", "--n", "3", "--s", "1/2", "--alpha", "1/4", "--scenario", "subcritical-usual"], "--scenario"),
        (vec!["region", "--n", "3", "--targets", "thm11", "--step", "3/8"], "--step"),
        (vec!["s0", "--n", "5", "--tol", "-1"], "--tol"),
    ] {
        let out = run(&args);
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(flag), "{args:?}: {err}");
    }
}

#[test]
fn reference_verdicts() {
    let doc = json(&["check", "--n", "3", "--s", "1/2", "--alpha", "3/2", "--scenario", "subcritical-usual"]);
    assert_eq!(doc["feasible"], true);
    assert_eq!(doc["sigma_interval"], serde_json::json!([["-1/2", "closed"], ["0", "open"]]));
    let doc = json(&["check", "--n", "3", "--s", "1/2", "--alpha", "2", "--scenario", "subcritical-usual"]);
    assert_eq!(doc["feasible"], false);
    let labels: Vec<&str> = doc["violated"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(labels.contains(&"bilinear: 0 < 1/r + sigma/n"), "{labels:?}");
    let doc = json(&["s0", "--n", "5", "--tol", "1/1000000"]);
    let lower: f64 = doc["lower_decimal"].as_str().unwrap().parse().unwrap();
    let upper: f64 = doc["upper_decimal"].as_str().unwrap().parse().unwrap();
    assert!(lower < 0.3255588 && 0.3255587 < upper && upper - lower <= 1e-6, "{doc}");
    assert_eq!(doc["certified"], true);
}

#[test]
fn every_document_matches_the_schema() {
    let schema = schema();
    let docs = [
        json(&["check", "--n", "3", "--s", "1/2", "--alpha", "3/2", "--scenario", "subcritical-usual"]),
        json(&["check", "--n", "3", "--s", "1/2", "--alpha", "2", "--scenario", "subcritical-usual"]),
        json(&["check", "--n", "3", "--s", "1/2", "--alpha", "3/4"]),
        json(&["check", "--n", "2", "--s", "1/4", "--alpha", "9/7"]),
        json(&["check", "--n", "5", "--s", "1/2", "--alpha", "1", "--scenario", "thm16"]),
        json(&["sigma", "--n", "3", "--s", "3/4", "--alpha", "29/24", "--scenario", "subcritical-usual"]),
        json(&["s0", "--n", "6", "--tol", "1/1000000000"]),
        json(&["verify", "--suite", "chains"]),
        json(&["verify", "--suite", "thresholds"]),
    ];
    for doc in &docs {
        assert_valid(&schema, doc);
    }
    let mut broken = docs[0].clone();
    broken["params"]["s"] = Value::from(0.5);
    assert!(!schema.is_valid(&broken));
    let mut missing = docs[0].clone();
    missing.as_object_mut().unwrap().remove("witness");
    assert!(!schema.is_valid(&missing));
}

#[test]
fn outputs_are_byte_stable() {
    for args in [
        vec!["check", "--n", "4", "--s", "1/3", "--alpha", "1"],
        vec!["region", "--n", "4", "--targets", "thm11,thm12,holder-usual", "--step", "1/8"],
        vec!["s0", "--n", "7", "--tol", "1/1000000"],
    ] {
        assert_eq!(run(&args).stdout, run(&args).stdout, "{args:?}");
    }
}

#[test]
fn region_csv_goes_to_file_in_lattice_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let out = run(&["region", "--n", "3", "--targets", "subcritical-usual,thm11", "--step", "1/2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "s,alpha,subcritical-usual,thm11");
    assert_eq!(lines.len(), 1 + 3 * 9);
    assert_eq!(lines[1], "0,0,NA,NA");
    assert_eq!(lines[2], "0,1/2,NA,F");
    assert!(lines.contains(&"1/2,3/2,T,T"));
    let keys: Vec<(String, String)> = lines[1..].iter().map(|l| {
        let mut it = l.split(',');
        (it.next().unwrap().to_string(), it.next().unwrap().to_string())
    }).collect();
    let first_s: Vec<&str> = keys.iter().map(|k| k.0.as_str()).collect();
    assert!(first_s.windows(2).all(|w| w[0] == w[1] || (w[0], w[1]) == ("0", "1/2") || (w[0], w[1]) == ("1/2", "1")));
}

#[test]
fn verify_reports_go_to_stderr() {
    let out = run(&["verify", "--suite", "chains"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("PASS chains"), "{err}");
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["passed"], true);
    let reports = doc["suites"][0]["details"].as_array().unwrap();
    assert_eq!(reports.len(), 7);
    let masked: Vec<&Value> = reports.iter().flat_map(|r| r["entries"].as_array().unwrap()).filter(|e| e["masked"] == true).collect();
    assert!(!masked.is_empty());
}
