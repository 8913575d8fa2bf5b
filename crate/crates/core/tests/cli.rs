mod common;

use std::process::{Command, Output};

fn blocksens(args: &[&str]) -> Output {
    let solver = common::solver_command();
    Command::new(env!("CARGO_BIN_EXE_blocksens"))
        .env("BLOCKSENS_SOLVER", solver.program())
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn analyze_reads_a_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("or2.txt");
    std::fs::write(&path, "n=2\n0111").unwrap();
    let out = blocksens(&["analyze", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("s(f) = 2"), "{text}");
    assert!(text.contains("bs(f) = 2"), "{text}");
}

#[test]
fn family_checks_pass() {
    let out = blocksens(&["family", "--virza-k", "1", "--check"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().last().unwrap().ends_with("check: PASS"), "{text}");
    assert!(!text.contains("FAIL"));

    let out = blocksens(&["family", "--rubinstein-m", "2", "--check"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("check: PASS"));

    let out = blocksens(&["family", "--rubinstein-m", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn encode_writes_dimacs_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = blocksens(&["encode", "--n", "4", "--s", "2", "--bs", "3", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let file = dir.path().join("n4-s2-bs3-p2_1_1.cnf");
    let text = std::fs::read_to_string(file).unwrap();
    assert!(text.lines().any(|l| l.starts_with("p cnf ")));
}

#[test]
fn search_and_table() {
    let out = blocksens(&["search", "--n", "4", "--s", "2", "--bs", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("feasible"));

    let out = blocksens(&["max-bs", "--n", "4", "--s", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains(": 3"));

    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("log.jsonl");
    let out = blocksens(&["--records", log.to_str().unwrap(), "table", "--max-n", "5"]);
    assert!(out.status.success());
    let rows: Vec<String> = stdout(&out).lines().skip(1).map(|l| l.split_whitespace().collect::<Vec<_>>().join(" ")).collect();
    assert_eq!(rows, [">=4 2 3", ">=5 3 4"]);
    assert!(std::fs::metadata(&log).unwrap().len() > 0);
}

#[test]
fn errors_exit_with_code_two() {
    let out = blocksens(&["analyze", "/definitely/not/here"]);
    assert_eq!(out.status.code(), Some(2));
    let out = blocksens(&["--solver-cmd", "/definitely/not/a/solver", "search", "--n", "4", "--s", "2", "--bs", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("solver"));
}
