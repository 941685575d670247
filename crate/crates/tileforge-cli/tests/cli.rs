use std::path::PathBuf;
use std::process::{Command, Output};

fn tileforge(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tileforge")).args(args).env("TILEFORGE_THREADS", threads).output().expect("binary runs")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tileforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn pipeline_manifest_is_thread_independent() {
    let e = scratch("e.txt", "x y z\nx y z\nx y z\n");
    let args = ["pipeline", "--input-kind", "1in3", "--in", e.to_str().unwrap(), "--stage", "irr", "--verify"];
    let one = tileforge(&args, "1");
    let four = tileforge(&args, "4");
    assert_eq!(one.status.code(), Some(0), "{}", String::from_utf8_lossy(&one.stderr));
    assert_eq!(one.stdout, four.stdout);
    let m: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(m["oracle"], 3);
    let counted: Vec<_> = m["stages"].as_array().unwrap().iter().filter(|s| !s["count"].is_null()).collect();
    assert!(counted.len() >= 3);
    assert!(counted.iter().all(|s| s["count"] == 3));
    assert!(m["parsimony"].as_array().unwrap().iter().all(|p| p["pass"] == true));
}

#[test]
fn oracle_lists_assignments() {
    let e = scratch("o.txt", "x y z\nx y z\nx y z\n");
    let out = tileforge(&["oracle", "1in3", "--in", e.to_str().unwrap(), "--list"], "1");
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["count"], 3);
    assert_eq!(v["assignments"], serde_json::json!([1, 2, 4]));
}

#[test]
fn bad_input_exits_4() {
    let p = scratch("bad.json", r#"{"format":"nope"}"#);
    let out = tileforge(&["solve", "wang", "--in", p.to_str().unwrap()], "1");
    assert_eq!(out.status.code(), Some(4));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "input");
}

#[test]
fn exhausted_budget_exits_3() {
    let e = scratch("b.txt", "x y z\nx y z\nx y z\n");
    let out = tileforge(&["pipeline", "--input-kind", "1in3", "--in", e.to_str().unwrap(), "--stage", "gen", "--max-nodes", "5"], "1");
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn gadget_validation_passes() {
    let out = tileforge(&["gadgets", "validate", "--depth", "2"], "1");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
