//! End-to-end checks of the binary: flags, output shapes, exit codes, and
//! determinism.

use std::process::{Command, Output};

fn nilmult(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilmult"))
        .args(args)
        .env_remove("NILMULT_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn hall_lists_the_ordered_basis() {
    let out = nilmult(&["hall", "--generators", "2", "--max-weight", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("[x2,x1]"));
    assert!(text.contains("[[x2,x1],x2]"));
}

#[test]
fn hall_json_has_rows() {
    let out = nilmult(&["hall", "--generators", "3", "--max-weight", "2", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["count"], 6);
    assert_eq!(v["rows"][3]["commutator"], "[x2,x1]");
}

#[test]
fn collect_prints_the_normal_form() {
    let out = nilmult(&[
        "collect", "--generators", "2", "--class", "2", "--word", "(x1 x2)^2",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "x1^2 x2^2 [x2,x1]");
}

#[test]
fn collect_handles_inverses_and_commutators() {
    let out = nilmult(&[
        "collect", "--generators", "2", "--class", "3", "--word", "[x1,x2] [x2,x1]",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1");
}

#[test]
fn lemma25_table_and_exit_zero() {
    let out = nilmult(&["lemma25", "--p", "2", "--k-max", "10", "--t-max", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("pass"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn multiplier_json_schema() {
    let out = nilmult(&["multiplier", "--group", "heisenberg:3", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["group"], "heisenberg:3");
    assert_eq!(v["order"], 27);
    assert_eq!(v["exponent"], 3);
    assert_eq!(v["class"], 2);
    assert_eq!(v["p"], 3);
    assert_eq!(v["multiplier_invariants"], serde_json::json!([3, 3]));
    assert_eq!(v["multiplier_exponent"], 3);
    assert!(v["version"].is_string());
    assert!(v["caps"]["homology_max_order"].is_number());
}

#[test]
fn multiplier_from_table_file() {
    let dir = std::env::temp_dir().join(format!("nilmult-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("klein.tbl");
    std::fs::write(&path, "4\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n").unwrap();
    let out = nilmult(&["multiplier", "--table", path.to_str().unwrap(), "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["order"], 4);
    assert_eq!(v["multiplier_invariants"], serde_json::json!([2]));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bounds_profile_values() {
    let out = nilmult(&["bounds", "--p", "2", "--e", "3", "--k", "6", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["profile"]["main_bound"], "8192");
    assert_eq!(v["profile"]["jones_bound"], "32768");
    assert_eq!(v["profile"]["ellis_bound"], "512");
    assert_eq!(v["profile"]["moravec_bound"], "4096");
}

#[test]
fn verify_lemma22_passes() {
    let out = nilmult(&[
        "verify", "lemma22", "--r", "2", "--class", "3", "--alpha-max", "10",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("pass"));
}

#[test]
fn verify_lemma23_with_template() {
    let out = nilmult(&[
        "verify", "lemma23", "--r", "3", "--class", "4", "--position", "2",
        "--alpha-max", "6", "--template", "[1,[2,3]]", "--json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["template"], "[1,[2,3]]");
}

#[test]
fn verify_corpus_from_file_writes_json() {
    let dir = std::env::temp_dir().join(format!("nilmult-corpus-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let corpus = dir.join("corpus.txt");
    std::fs::write(&corpus, "# tiny corpus\ncyclic:4\ndihedral:8\ncyclic:6\n").unwrap();
    let json_path = dir.join("report.json");
    let out = nilmult(&[
        "verify", "corpus",
        "--corpus", corpus.to_str().unwrap(),
        "--json", json_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(report["summary"]["total"], 3);
    assert_eq!(report["summary"]["failed"], 0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn empty_corpus_file_is_empty_report_exit_zero() {
    let dir = std::env::temp_dir().join(format!("nilmult-empty-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let corpus = dir.join("empty.txt");
    std::fs::write(&corpus, "# nothing here\n").unwrap();
    let out = nilmult(&["verify", "corpus", "--corpus", corpus.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("total 0"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_subcommand_exits_2() {
    let out = nilmult(&["bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_word_exits_2() {
    let out = nilmult(&["collect", "--generators", "2", "--class", "2", "--word", "y1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn max_order_env_caps_the_homology() {
    let out = Command::new(env!("CARGO_BIN_EXE_nilmult"))
        .args(["multiplier", "--group", "dihedral:16"])
        .env("NILMULT_MAX_ORDER", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let args = ["multiplier", "--group", "abelian:4,2", "--json"];
    let a = nilmult(&args);
    let b = nilmult(&args);
    assert_eq!(a.stdout, b.stdout);
    let args = ["hall", "--generators", "3", "--max-weight", "4", "--format", "json"];
    let a = nilmult(&args);
    let b = nilmult(&args);
    assert_eq!(a.stdout, b.stdout);
}
