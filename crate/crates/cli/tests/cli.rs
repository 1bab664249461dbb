use std::process::{Command, Output};

use serde_json::Value;

fn hemispec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hemispec")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn spectrum_equator() {
    let v = json_of(&hemispec(&["spectrum", "--model", r#"{"kind":"Equator","n":3}"#, "--no-timestamp"]));
    assert_eq!(v["output"]["lambda1"], -3.0);
    assert_eq!(v["output"]["strong"]["strong_index"], 1);
    assert_eq!(v["config"]["common"]["seed"], 42);
    assert!(v.get("generated_unix").is_none());
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn spectrum_cap() {
    let v = json_of(&hemispec(&["spectrum", "--model", r#"{"kind":"UmbilicalCap","n":2,"r":0.5}"#]));
    assert_eq!(v["output"]["lambda1"], -8.0);
    assert!(v.get("generated_unix").is_some());
}

#[test]
fn spectrum_csv_round_trips() {
    let out = hemispec(&["spectrum", "--model", r#"{"kind":"UmbilicalCap","n":2,"r":0.8}"#, "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("value,multiplicity,label"));
    let first: f64 = lines.next().unwrap().split(',').next().unwrap().parse().unwrap();
    assert!((first + 2.0 / 0.64).abs() < 1e-14);
    let v = json_of(&hemispec(&["spectrum", "--model", r#"{"kind":"UmbilicalCap","n":2,"r":0.8}"#]));
    assert_eq!(v["output"]["spectrum"]["lines"][0]["value"].as_f64().unwrap(), first);
}

#[test]
fn malformed_model() {
    let out = hemispec(&["spectrum", "--model", r#"{"kind":"Equ"#]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = hemispec(&["spectrum", "--model", r#"{"kind":"Equator","n":3,"r":0.5}"#]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn index_scan_window() {
    let v = json_of(&hemispec(&["index-scan", "--n", "2", "--k", "1", "--grid", "0.30:0.95:0.001"]));
    let w = &v["output"]["window"];
    let (lo, hi) = (w["empirical"][0].as_f64().unwrap(), w["empirical"][1].as_f64().unwrap());
    assert!((lo - 0.5).abs() <= 1e-3 && (hi - 0.75f64.sqrt()).abs() <= 1e-3, "{w}");
    let v = json_of(&hemispec(&["index-scan", "--n", "4", "--k", "3", "--grid", "0.30:0.95:0.001"]));
    let w = &v["output"]["window"];
    assert!(w["max_endpoint_deviation"].as_f64().unwrap() <= 1e-3);
    assert!((w["analytic"][0].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn index_scan_bad_range() {
    assert_eq!(hemispec(&["index-scan", "--n", "2", "--k", "1", "--grid", "0.5:0.4:0.01"]).status.code(), Some(2));
    assert_eq!(hemispec(&["index-scan", "--n", "2", "--k", "1", "--grid", "0.5:0.6"]).status.code(), Some(2));
    assert_eq!(hemispec(&["index-scan", "--n", "2", "--k", "2"]).status.code(), Some(2));
}

#[test]
fn verify_alencar() {
    let v = json_of(&hemispec(&["verify", "--suite", "alencar", "--samples", "100000"]));
    assert_eq!(v["output"]["pass"], true);
}

#[test]
fn verify_bounds_htorus_equality_at_k2() {
    let v = json_of(&hemispec(&["verify", "--suite", "bounds", "--family", "htorus", "--n", "3"]));
    let reports = v["output"]["reports"].as_array().unwrap();
    assert!(!reports.is_empty());
    for r in reports {
        let k = r["family_params"]["k"].as_u64().unwrap();
        assert_eq!(r["equality"].as_bool().unwrap(), k == 2, "{r}");
    }
}

#[test]
fn verify_unknown_suite() {
    assert_eq!(hemispec(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn fem_equator() {
    let v = json_of(&hemispec(&["fem", "--model", r#"{"kind":"Equator","n":2}"#, "--refine", "5"]));
    assert_eq!(v["output"]["comparison"]["index_agreement"], true);
    assert_eq!(v["output"]["result"]["num_negative"], 1);
}

#[test]
fn fem_clifford_annotation() {
    let v = json_of(&hemispec(&["fem", "--model", r#"{"kind":"MinimalCliffordHalf","n":2,"k":1}"#, "--refine", "6"]));
    let c = &v["output"]["comparison"];
    assert_eq!(v["output"]["strong_index"], 4);
    assert_eq!(c["engine_strong_index"], 4);
    assert_eq!(c["paper_claim"], 3);
    assert_eq!(c["discrepancy_flag"], true);
    assert!(v["summary"].as_str().unwrap().contains("paper claims 3"));
}

#[test]
fn fem_rejects() {
    assert_eq!(hemispec(&["fem", "--model", r#"{"kind":"Equator","n":2}"#, "--refine", "9"]).status.code(), Some(2));
    assert_eq!(hemispec(&["fem", "--model", r#"{"kind":"Equator","n":3}"#]).status.code(), Some(2));
}

#[test]
fn fem_exports() {
    let dir = tempfile::tempdir().unwrap();
    let off = dir.path().join("mesh.off");
    let prefix = dir.path().join("cap");
    let out = hemispec(&[
        "fem",
        "--model",
        r#"{"kind":"UmbilicalCap","n":2,"r":0.7}"#,
        "--refine",
        "2",
        "--export-mesh",
        off.to_str().unwrap(),
        "--export-matrices",
        prefix.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(std::fs::read_to_string(&off).unwrap().starts_with("OFF\n"));
    let mtx = std::fs::read_to_string(dir.path().join("cap_mass.mtx")).unwrap();
    assert!(mtx.starts_with("%%MatrixMarket"));
}

#[test]
fn identical_runs_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let mut runs = Vec::new();
    for _ in 0..2 {
        let out = hemispec(&["verify", "--suite", "algebra", "--seed", "7", "--no-timestamp", "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
        runs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
    let a = &runs[0];
    let v: Value = serde_json::from_slice(a).unwrap();
    assert_eq!(v["config"]["common"]["seed"], 7);
}

#[test]
fn report_runs() {
    let v = json_of(&hemispec(&["report", "--n-max", "3", "--step", "0.01"]));
    assert_eq!(v["output"]["windows"].as_array().unwrap().len(), 3);
}
