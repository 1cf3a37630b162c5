use std::process::{Command, Output};

use serde_json::Value;

fn modsymp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modsymp")).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn verify_small_grid_passes() {
    let out = modsymp(&["verify", "dickson", "--max-n", "6"]);
    let report = stdout_json(&out);
    assert_eq!(report["suite"], "dickson");
    assert_eq!(report["summary"]["fail"], 0);
    let ids: Vec<&str> = report["claims"].as_array().unwrap().iter().map(|c| c["claim_id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"siegel-intersection/S6"));
    assert!(ids.iter().all(|id| !id.contains("n=7")));
}

#[test]
fn verify_output_is_reproducible() {
    let a = modsymp(&["verify", "dickson", "--max-n", "7", "--seed", "3"]);
    let b = modsymp(&["verify", "dickson", "--max-n", "7", "--seed", "3", "--jobs", "2"]);
    let (a, b) = (stdout_json(&a), stdout_json(&b));
    assert_eq!(a["claims"], b["claims"]);
    assert!(a["claims"][0]["runtime_ms"].is_null());
}

#[test]
fn empty_grid_has_no_claims() {
    let report = stdout_json(&modsymp(&["verify", "all", "--empty"]));
    assert_eq!(report["claims"].as_array().unwrap().len(), 0);
    assert_eq!(report["summary"]["pass"], 0);
}

#[test]
fn timings_fill_runtime() {
    let report = stdout_json(&modsymp(&["verify", "dickson", "--max-n", "5", "--timings"]));
    assert!(report["claims"].as_array().unwrap().iter().all(|c| c["runtime_ms"].is_u64()));
}

#[test]
fn invalid_config_exits_2() {
    let out = modsymp(&["verify", "dickson", "--max-n", "40"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("max_n"));
    let out = modsymp(&["oracle", "decompose-small-module", "--rank", "7"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn writes_csv_table_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lie.csv");
    let out = modsymp(&["table", "lietype", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("family,"));
    assert_eq!(lines.count(), 36);
}

#[test]
fn oracle_commands() {
    let v = stdout_json(&modsymp(&["oracle", "enum-parabolic", "--n", "6"]));
    assert_eq!((v["order"].as_u64(), v["rank"].as_u64()), (Some(8), Some(3)));
    let v = stdout_json(&modsymp(&["oracle", "enum-parabolic", "--n", "8", "--alt"]));
    assert_eq!(v["rank"], 3);
    let v = stdout_json(&modsymp(&["oracle", "tableau-count", "--partition", "5,2"]));
    assert_eq!(v["count"], 14);
    let v = stdout_json(&modsymp(&["oracle", "decompose-small-module", "--rank", "2"]));
    assert_eq!(v["summand_dims"], serde_json::json!([4]));
    assert_eq!(v["free_count"], 1);
}

#[test]
fn dump_modules() {
    let v = stdout_json(&modsymp(&["dump", "irreducible", "--partition", "4,1", "--p", "5"]));
    assert_eq!(v["dim"], 3);
    assert_eq!(v["generators"].as_array().unwrap().len(), 4);
    let v = stdout_json(&modsymp(&["dump", "perm-irrep", "--n", "6", "--p", "2"]));
    assert_eq!(v["dim"], 4);
    let out = modsymp(&["dump", "specht", "--partition", "2,x"]);
    assert_eq!(out.status.code(), Some(2));
}
