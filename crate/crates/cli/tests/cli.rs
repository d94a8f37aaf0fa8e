use std::path::Path;
use std::process::{Command, Output};

use listop_cli::output::strip_timestamp;

fn listop(args: &[&str], budget: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_listop"));
    cmd.args(args);
    match budget {
        Some(b) => cmd.env("LISTOP_BUDGET", b),
        None => cmd.env_remove("LISTOP_BUDGET"),
    };
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p.to_string_lossy().into_owned()
}

fn body(out: &Output) -> String {
    strip_timestamp(&String::from_utf8(out.stdout.clone()).unwrap())
}

/// Column `name` of the first data row.
fn field(csv: &str, name: &str) -> String {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    row[i].to_string()
}

const ONE_TRIAL: &str = r#"{
  "base_code": {"random": {"q": 2, "n": 10, "N": 4}},
  "params": {"kind": "sampling", "n": 7, "L": 1, "lambda": [0], "trials": 1},
  "master_seed": 3
}"#;

#[test]
fn single_codeword_estimate_is_n() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "e.json", ONE_TRIAL);
    let out = listop(&["estimate-E", "--config", &cfg], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = body(&out);
    assert_eq!(field(&csv, "mean").parse::<f64>().unwrap(), 7.0);
    assert_eq!(field(&csv, "std_dev").parse::<f64>().unwrap(), 0.0);
}

#[test]
fn output_is_independent_of_thread_count() {
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/estimate-E.json");
    let a = listop(&["estimate-E", "--config", cfg, "--threads", "1"], None);
    let b = listop(&["estimate-E", "--config", cfg, "--threads", "4"], None);
    assert!(a.status.success() && b.status.success());
    assert_eq!(body(&a), body(&b));
    // a different seed changes the run
    let c = listop(&["estimate-E", "--config", cfg, "--seed", "99"], None);
    assert_ne!(body(&a), body(&c));
    assert!(body(&c).contains("99"));
}

#[test]
fn bad_fold_block_size_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "f.json",
        r#"{"base_code": {"random": {"q": 2, "n": 10, "N": 4}}, "params": {"kind": "fold", "t": 3, "L": 2, "trials": 2}}"#,
    );
    let out_path = dir.path().join("never.csv");
    let out = listop(&["estimate-E", "--config", &cfg, "--out", out_path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("params.t"));
    assert!(!out_path.exists());
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "u.json", r#"{"params": {}, "colour": 1}"#);
    let out = listop(&["johnson-audit", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(2));
    let cfg = write_config(dir.path(), "p.json", r#"{"params": {"instances": 2, "bogus": 1}}"#);
    let out = listop(&["johnson-audit", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("params"));
}

#[test]
fn budget_overrun_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "b.json",
        r#"{"base_code": {"random": {"q": 2, "n": 10, "N": 8}},
            "params": {"kind": "sampling", "n": 6, "L": 3, "trials": 10, "lambda_search": "exact"}}"#,
    );
    let out_path = dir.path().join("b.csv");
    let out = listop(&["estimate-E", "--config", &cfg, "--out", out_path.to_str().unwrap()], Some("16"));
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!out_path.exists());
    let out = listop(&["estimate-E", "--config", &cfg, "--out", out_path.to_str().unwrap()], None);
    assert!(out.status.success());
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert!(written.starts_with("# scenario: estimate-E"));
}

#[test]
fn scenario_mismatch_and_thread_zero_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "m.json", r#"{"scenario": "xor-ld", "params": {}}"#);
    assert_eq!(listop(&["johnson-audit", "--config", &cfg], None).status.code(), Some(2));
    let cfg = write_config(
        dir.path(),
        "j.json",
        r#"{"base_code": {"random": {"q": 3, "n": 5, "N": 6}}, "params": {"instances": 3}}"#,
    );
    assert_eq!(listop(&["johnson-audit", "--config", &cfg, "--threads", "0"], None).status.code(), Some(2));
    assert!(listop(&["johnson-audit", "--config", &cfg], None).status.success());
}
