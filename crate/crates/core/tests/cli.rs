use std::process::{Command, Output};

use serde_json::Value;

fn kneser(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kneser"))
        .args(args)
        .env_remove("KNESER_MAX_N")
        .env_remove("KNESER_MAX_VERTICES")
        .env_remove("KNESER_MAX_FACES")
        .env_remove("KNESER_NODE_LIMIT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn grid(name: &str) -> String {
    format!("{}/../../grids/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn ecd_prints_value_and_witness() {
    let o = kneser(&["ecd", "--family", "ksubsets:n=6,k=2", "--r", "2", "--witness"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("4"));
    assert!(text.contains("removed: {1,2,3,4}"));
}

#[test]
fn ecd_json_has_the_value() {
    let o = kneser(&["ecd", "--family", "ksubsets:n=8,k=3", "--r", "2", "--s", "1", "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["value"], 6);
}

#[test]
fn chi_of_the_petersen_graph() {
    let o = kneser(&["chi", "--family", "ksubsets:n=5,k=2", "--r", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn chi_reads_inline_hypergraph_json() {
    let h = r#"{"r":2,"vertices":[[1],[2],[3]],"edges":[[0,1],[1,2],[0,2]],"meta":{"construction":"test","n":3}}"#;
    let o = kneser(&["chi", "--hypergraph", h]);
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn lift_drops_zero_weight_elements() {
    let o = kneser(&["lift", "--family", "ksubsets:n=3,k=1", "--weights", "1,2,0", "--partition", "singletons", "--emit", "family"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["sets"], serde_json::json!([[1], [2], [3], [2, 3]]));
}

#[test]
fn tucker_check_reports_conditions_and_time_on_stderr() {
    let o = kneser(&["tucker-check", "--p", "2", "--n", "4", "--family", "ksubsets:n=4,k=2", "--s", "0", "--partition", "1,2|3,4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all conditions: holds"));
    assert!(!stdout(&o).contains("elapsed"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("elapsed:"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(kneser(&["ecd", "--family", "bogus", "--r", "2"]).status.code(), Some(2));
    assert_eq!(kneser(&["ecd", "--family", "ksubsets:n=4,k=2"]).status.code(), Some(2));
    assert_eq!(kneser(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{bad").unwrap();
    assert_eq!(kneser(&["verify", "--suite", "all", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn resource_caps_exit_three() {
    let o = kneser(&["--max-n", "4", "ecd", "--family", "ksubsets:n=6,k=2", "--r", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_kneser"))
        .args(["ecd", "--family", "ksubsets:n=6,k=2", "--r", "2"])
        .env("KNESER_MAX_N", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unwritable_output_exits_four() {
    let o = kneser(&["verify", "--suite", "formulas", "--config", &grid("default.json"), "--out", "/nonexistent/dir/x.jsonl"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn verify_writes_log_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let (log, csv) = (dir.path().join("v.jsonl"), dir.path().join("t.csv"));
    let o = kneser(&[
        "verify",
        "--suite",
        "all",
        "--config",
        &grid("default.json"),
        "--out",
        log.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("theorems:") && text.contains(" 0 violated"));
    assert!(text.trim_end().ends_with("failures: 0"));
    let table = std::fs::read_to_string(csv).unwrap();
    assert_eq!(table.lines().next(), Some("suite,check,family,partition,r,s,a,t,weights,ecd,bound,chi,verdict"));
    let mut rows = csv::Reader::from_reader(table.as_bytes());
    assert!(rows.records().all(|r| r.unwrap().len() == 13));
    for line in std::fs::read_to_string(log).unwrap().lines() {
        serde_json::from_str::<Value>(line).unwrap();
    }
}

#[test]
fn hunt_resumes_from_its_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("h.jsonl");
    let args = ["hunt", "--config", &grid("hunt.json"), "--checkpoint", ckpt.to_str().unwrap(), "--json"];
    let first: Value = serde_json::from_slice(&kneser(&args).stdout).unwrap();
    let before = std::fs::read(&ckpt).unwrap();
    let second: Value = serde_json::from_slice(&kneser(&args).stdout).unwrap();
    assert_eq!(first["complete"], true);
    assert_eq!(second["evaluated"], 0);
    assert_eq!(second["resumed"], first["points"]);
    assert_eq!(first["violations"], second["violations"]);
    assert_eq!(std::fs::read(&ckpt).unwrap(), before);
}
