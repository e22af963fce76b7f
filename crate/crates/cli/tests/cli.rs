use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).to_string_lossy().into_owned()
}

fn rankgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankgeo")).args(args).env_remove("RANKGEO_BUDGET").output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn weights_of_the_four_two_code() {
    let out = rankgeo(&["weights", "--code", &data("example215.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out), json!({"d": 2, "profile": [2, 4]}));
}

#[test]
fn table_format() {
    let out = rankgeo(&["--format", "table", "weights", "--code", &data("example215.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("d") && l.trim_end().ends_with('2')), "{text}");
    let out = rankgeo(&["--format", "table", "classify", "--code", &data("example215.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("is_near_mrd"));
}

#[test]
fn classify_flags() {
    let out = rankgeo(&["classify", "--code", &data("example215.json")]);
    let v = json_of(&out);
    assert_eq!(v["flags"]["is_near_mrd"], json!(true));
    assert_eq!(v["flags"]["is_mrd"], json!(false));
    assert_eq!(v["flags"]["is_quasi_mrd"], json!(true));
    assert_eq!(v["rank_defect"], json!(0));
}

#[test]
fn evasiveness_of_the_five_two_code() {
    let code = data("example310.json");
    let yes = json_of(&rankgeo(&["evasive", "--code", &code, "--h", "1", "--r", "3"]));
    assert_eq!(yes, json!({"h": 1, "r": 3, "evasive": true}));
    let no = rankgeo(&["evasive", "--code", &code, "--h", "1", "--r", "2", "--witness"]);
    let w = json_of(&no);
    assert_eq!(w["evasive"], json!(false));
    assert_eq!(w["intersection_dim"], json!(3));
}

#[test]
fn dual_of_a_full_code_is_zero() {
    let v = json_of(&rankgeo(&["dual", "--code", &data("full-f8.json")]));
    assert_eq!(v["zero"], json!(true));
    assert_eq!(v["length"], json!(2));
}

#[test]
fn constructed_documents_load_back() {
    let path = scratch("gabidulin-4-2.json");
    let out = rankgeo(&["--output", path.to_str().unwrap(), "construct", "gabidulin", "--m", "4", "--n", "4", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let w = json_of(&rankgeo(&["weights", "--code", path.to_str().unwrap()]));
    assert_eq!(w, json!({"d": 3, "profile": [3, 4]}));
    let s = json_of(&rankgeo(&["spectrum", "--code", path.to_str().unwrap()]));
    assert_eq!(s["max"], json!(1));

    let path = scratch("near-mrd-4-3.json");
    rankgeo(&["--output", path.to_str().unwrap(), "construct", "near-mrd", "--m", "4", "--k", "3"]);
    let c = json_of(&rankgeo(&["classify", "--system", path.to_str().unwrap()]));
    assert_eq!(c["flags"]["is_near_mrd"], json!(true));
    assert_eq!(c["n"], json!(5));
}

#[test]
fn search_finds_and_excludes() {
    let found = json_of(&rankgeo(&["construct", "search", "--m", "4", "--k", "2", "--h", "1", "--n", "4"]));
    assert_eq!(found["outcome"], json!("found"));
    let path = scratch("found.json");
    std::fs::write(&path, serde_json::to_string(&found["system"]).unwrap()).unwrap();
    let ev = json_of(&rankgeo(&["evasive", "--system", path.to_str().unwrap(), "--h", "1", "--r", "1"]));
    assert_eq!(ev["evasive"], json!(true));

    let none = rankgeo(&["construct", "search", "--m", "4", "--k", "2", "--h", "1", "--n", "5"]);
    assert_eq!(none.status.code(), Some(0));
    let v = json_of(&none);
    assert_eq!(v["outcome"], json!("none"));
    assert!(v["excluded"].is_string());
}

#[test]
fn verify_small_range_passes() {
    let out = rankgeo(&["verify", "evasive-weights", "--q", "2", "--m", "3", "--k", "2", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["failures"], json!(0));
    assert!(v["instances"].as_u64().unwrap() > 0);
}

#[test]
fn verify_catches_a_broken_bound() {
    let out = rankgeo(&["verify", "scattered-bound", "--bound-offset", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json_of(&out);
    assert!(v["failures"].as_u64().unwrap() > 0);
    assert!(v["first_counterexample"]["code"]["generator"].is_array());
}

#[test]
fn verify_lists_suites() {
    let out = rankgeo(&["verify", "--list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("evasive-weights") && text.contains("rank-defect"));
}

#[test]
fn exit_codes() {
    assert_eq!(rankgeo(&["weights", "--code", "/nonexistent/code.json"]).status.code(), Some(1));
    assert_eq!(rankgeo(&["weights"]).status.code(), Some(1));
    assert_eq!(rankgeo(&["--help"]).status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_rankgeo"))
        .args(["weights", "--code", &data("example215.json")])
        .env("RANKGEO_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "weight-algorithms", "--random", "20", "--seed", "7"];
    let a = rankgeo(&args);
    let b = rankgeo(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
