use std::path::PathBuf;
use std::process::{Command, Output};

fn data_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_collapse")).env("COLLAPSE_DATA", data_dir()).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn stderr_of_failure(args: &[&str]) -> String {
    let out = run(args);
    assert!(!out.status.success(), "{args:?} should fail");
    String::from_utf8(out.stderr).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("collapse-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn classify_a4_uses_the_a4_criterion() {
    let text = stdout(&["classify", "A4"]);
    let line = text.lines().find(|l| l.starts_with("2A")).unwrap();
    assert!(line.contains("AllReprsInfinite") && line.contains("A4: S(2A,3A,3A)=3"), "{line}");
    assert_eq!(text.lines().last().unwrap(), "not settled: 3A 3B");
}

#[test]
fn classify_records_round_trip() {
    let records = stdout(&["classify", "F21", "--format", "records"]);
    let lines: Vec<&str> = records.lines().collect();
    assert_eq!(lines.len(), 5);
    let summary: serde_json::Value = serde_json::from_str(lines[4]).unwrap();
    assert_eq!(summary["summary"], "not settled: 3A 3B");
    let path = scratch("f21.jsonl", &records);
    assert!(stdout(&["verify", "F21", path.to_str().unwrap()]).starts_with("verified "));
    std::fs::remove_file(path).ok();
}

#[test]
fn classify_table_mode() {
    let text = stdout(&["classify", "M11.ctab"]);
    assert!(text.starts_with("M11 (order 7920, table mode"));
    assert_eq!(text.lines().last().unwrap(), "not settled: 4A 6A 8A 8B");
    assert!(stderr_of_failure(&["classify", "M11.ctab", "--subgroup", "A=A5"]).contains("group file"));
}

#[test]
fn subgroup_fusion_settles_more_classes() {
    let text = stdout(&["classify", "A5", "--subgroup", "A4=A4"]);
    let line = text.lines().find(|l| l.starts_with("2A")).unwrap();
    assert!(!line.contains("Open"), "{line}");
}

#[test]
fn typed_searches() {
    assert!(stdout(&["typed", "S6", "2B+2C"]).starts_with("witness "));
    assert!(stdout(&["typed", "S5", "2A"]).starts_with("none (exhaustive"));
    assert!(stdout(&["typed", "M11", "11A", "--strategy", "random", "--seed", "1", "--budget-samples", "50"]).starts_with("unknown"));
    assert!(stderr_of_failure(&["typed", "S5", "2A", "--strategy", "random"]).contains("--seed"));
    assert!(stderr_of_failure(&["typed", "S5", "9Z"]).contains("9Z"));
}

#[test]
fn sval_and_verify_records() {
    assert_eq!(stdout(&["sval", "J2", "2A", "3B", "3B"]).trim(), "18");
    let rec = stdout(&["sval", "S5.ctab", "2A", "3A", "6A", "--format", "records"]);
    let path = scratch("sval.jsonl", &rec);
    assert_eq!(stdout(&["verify", "S5", path.to_str().unwrap()]).trim(), "verified 1 items");
    std::fs::write(&path, rec.replace(&format!("\"value\":\"{}\"", serde_json::from_str::<serde_json::Value>(&rec).unwrap()["value"].as_str().unwrap()), "\"value\":\"999\"")).unwrap();
    assert!(stderr_of_failure(&["verify", "S5", path.to_str().unwrap()]).contains("recomputes"));
    std::fs::remove_file(path).ok();
}

#[test]
fn nichols_builtins_and_rack_files() {
    assert_eq!(stdout(&["nichols", "fk3", "-1", "6"]).trim(), "1,3,4,3,1,0 total 12");
    assert_eq!(stdout(&["nichols", "point", "-1", "3"]).trim(), "1,1,0 total 2");
    assert_eq!(stdout(&["nichols", "point", "E(3)", "4"]).trim(), "1,1,1,0 total 3");
    assert!(stdout(&["nichols", "point", "1", "3"]).contains("not terminated"));
    assert!(stdout(&["nichols", "fk3", "-1", "6", "--budget-tensor", "100"]).contains("budget exceeded"));
    let rack = scratch("t.rack", "RACK v1\nsize 3\n0 2 1\n2 1 0\n1 0 2\n");
    assert_eq!(stdout(&["nichols", rack.to_str().unwrap(), "-1", "6"]).trim(), "1,3,4,3,1,0 total 12");
    std::fs::remove_file(rack).ok();
}

#[test]
fn chartab_matches_frozen_tables() {
    for name in ["S3", "A5", "F21"] {
        let frozen = std::fs::read_to_string(data_dir().join(format!("{name}.ctab"))).unwrap();
        assert_eq!(stdout(&["chartab", name, "--verify"]), frozen);
    }
    assert!(stdout(&["chartab", "S3", "--name", "Sym3"]).contains("group Sym3"));
    assert!(stderr_of_failure(&["chartab", "M12", "--budget-dixon", "1000"]).contains("budget"));
}

#[test]
fn fuse_lists_every_subgroup_class() {
    let text = stdout(&["fuse", "A4", "A5"]);
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("3B (3) -> 3A (3)"));
}

#[test]
fn errors_are_reported_with_positions() {
    let bad = scratch("bad.ctab", "CTAB 1\ngroup X\norder 2\nnclasses 2\nclasses 1A 2A\nsizes 1 1\norders 1 2\npowermap 2 1 1\nchar 1 1\nchar 1 2\n");
    assert!(stderr_of_failure(&["classify", bad.to_str().unwrap()]).contains("line 9"));
    std::fs::remove_file(bad).ok();
    assert!(stderr_of_failure(&["classify", "NoSuchGroup"]).contains("cannot read"));
    assert!(stderr_of_failure(&["classify", "S3", "--budget-enum", "0"]).contains("positive"));
    assert!(stderr_of_failure(&["classify", "S8", "--budget-enum", "100"]).contains("budget"));
}
