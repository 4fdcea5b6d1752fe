use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symrank"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn construct_then_verify_f8() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["construct", "--q", "2", "--n", "3", "--max-degree", "4", "--strategy", "default", "--out", "alg.json"], dir.path());
    assert!(out.status.success());
    let doc = json(&dir.path().join("alg.json"));
    assert_eq!(doc["rank"], 7);
    assert_eq!(doc["terms"].as_array().unwrap().len(), 7);

    let out = run(&["verify", "alg.json", "--mode", "exhaustive"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("64/64 pairs ok"));
}

#[test]
fn corrupted_term_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    run(&["construct", "--q", "3", "--n", "4", "--max-degree", "2", "--out", "alg.json"], dir.path());
    let mut doc = json(&dir.path().join("alg.json"));
    let w = &mut doc["terms"][0]["w"][0];
    *w = Value::from((w.as_u64().unwrap() + 1) % 3);
    std::fs::write(dir.path().join("bad.json"), serde_json::to_string(&doc).unwrap()).unwrap();
    let out = run(&["verify", "bad.json", "--out", "rep.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&dir.path().join("rep.json"))["failure_count"].as_u64().unwrap() > 0);
}

#[test]
fn reducible_modulus_is_rejected_on_import() {
    let dir = tempfile::tempdir().unwrap();
    run(&["construct", "--q", "2", "--n", "3", "--out", "alg.json"], dir.path());
    let mut doc = json(&dir.path().join("alg.json"));
    doc["modulus_Q"] = serde_json::json!([1, 0, 0, 1]);
    std::fs::write(dir.path().join("bad.json"), serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(run(&["verify", "bad.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(run(&["bound", "--q", "5", "--n", "30"], p).status.code(), Some(2));
    assert_eq!(run(&["bound", "--q", "2", "--n", "5"], p).status.code(), Some(2));
    assert_eq!(run(&["construct", "--q", "6", "--n", "3"], p).status.code(), Some(2));
    assert_eq!(run(&["construct", "--q", "2", "--n", "3", "--max-degree", "3"], p).status.code(), Some(2));
    assert_eq!(run(&["audit", "--q", "2", "--i-max", "1"], p).status.code(), Some(2));
    assert_eq!(run(&["verify", "missing.json"], p).status.code(), Some(2));
    for bad in [r#"{"0": {"value": 1, "source": "x"}}"#, r#"{"2": {"value": 3}}"#, r#"{"2": {"value": -1, "source": "x"}}"#] {
        std::fs::write(p.join("kv.json"), bad).unwrap();
        let out = run(&["bound", "--q", "2", "--n", "2", "--known-values", "kv.json"], p);
        assert_eq!(out.status.code(), Some(2), "{bad}");
    }
}

#[test]
fn known_values_cover_small_n() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("kv.json"), r#"{"2": {"value": 3, "source": "Winograd equality"}}"#).unwrap();
    let out = run(&["bound", "--q", "2", "--n", "2", "--known-values", "kv.json"], dir.path());
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["bound_floor"], "3");
    assert_eq!(doc["source"]["table"], "Winograd equality");
}

#[test]
fn bound_report_for_ternary_13() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["bound", "--q", "3", "--n", "13", "--mode", "certified"], dir.path());
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let branches = doc["branches"].as_array().unwrap();
    let next = branches.iter().find(|b| b["branch"] == "next_step").unwrap();
    assert_eq!(next["value"], "231");
    assert_eq!(next["step"]["label"], "G_3");
    assert_eq!(doc["bound"], "75");
    assert_eq!(doc["branches"][doc["chosen"].as_u64().unwrap() as usize]["step"]["label"], "G_1");
    assert!(!doc["trace"].as_array().unwrap().is_empty());
}

/// `"a/b"` or `"a"` as an exact fraction, checked against the floor column.
fn parse_rational(s: &str) -> (i128, i128) {
    match s.split_once('/') {
        Some((a, b)) => (a.parse().unwrap(), b.parse().unwrap()),
        None => (s.parse().unwrap(), 1),
    }
}

#[test]
fn csv_table_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["table", "--q", "2", "--from", "19", "--to", "100", "--format", "csv"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,mode,step_i,step_s,genus_used,bound_rational,bound_floor"));
    let json_out = run(&["table", "--q", "2", "--from", "19", "--to", "100"], dir.path());
    let reports: Vec<Value> = serde_json::from_slice(&json_out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 82);
    for (row, report) in rows.iter().zip(&reports) {
        assert_eq!(row[0], report["n"].to_string());
        assert_eq!(row[5], report["bound"]);
        assert_eq!(row[6], report["bound_floor"]);
        let (a, b) = parse_rational(row[5]);
        assert_eq!(a.div_euclid(b).to_string(), row[6]);
    }
    for w in rows.windows(2) {
        let (x, y) = (parse_rational(w[0][5]), parse_rational(w[1][5]));
        assert!(x.0 * y.1 <= y.0 * x.1, "bounds are non-decreasing in n");
    }
}

#[test]
fn tower_step_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["tower", "--q", "2", "--i", "1", "--s", "1"], dir.path());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["step"]["label"], "H_{1,1}");
    assert_eq!(doc["genus_exact"], "21");
    assert_eq!(doc["exact_counts"], serde_json::json!([4, 2, 25]));
}
