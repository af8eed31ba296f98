//! End-to-end tests of the `wirec` binary: exit codes, output formats and
//! budget resolution.

use std::path::Path;
use std::process::{Command, Output};

const PROGRAM: &str = include_str!("../programs/flipflop.wc");

fn write_program(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("prog.wc");
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wirec"));
    cmd.args(args).env_remove("WIREC_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process was killed by a signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn check_lists_every_definition_with_its_sort() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_program(dir.path(), PROGRAM);
    let out = run(&["check", path.to_str().unwrap()], &[]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    for line in ["I : (1,1)", "D : (0,2)", "E : (2,0)", "F0 : (1,1)", "F1 : (1,1)", "RING : (0,0)", "NIL : (0,0)"] {
        assert!(text.contains(line), "missing `{line}` in:\n{text}");
    }
}

#[test]
fn bisim_agreement_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_program(dir.path(), PROGRAM);
    let out = run(&["bisim", path.to_str().unwrap(), "RING", "NIL"], &[]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("bisimilar: yes"));
}

#[test]
fn bisim_disagreement_exits_ten_with_a_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_program(dir.path(), PROGRAM);
    let out = run(&["bisim", path.to_str().unwrap(), "F0", "F1"], &[]);
    assert_eq!(code(&out), 10);
    let text = stdout(&out);
    assert!(text.contains("bisimilar: no"), "got:\n{text}");
    assert!(text.contains("unmatched"), "got:\n{text}");
}

#[test]
fn bisim_json_verdict_is_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_program(dir.path(), PROGRAM);
    let out = run(
        &["bisim", path.to_str().unwrap(), "F0", "F1", "--format", "json"],
        &[],
    );
    assert_eq!(code(&out), 10);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["bisimilar"], serde_json::Value::Bool(false));
    assert!(v["counterexample"].as_array().is_some_and(|a| !a.is_empty()));
}

#[test]
fn lts_formats_cover_text_json_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_program(dir.path(), PROGRAM);
    let file = path.to_str().unwrap();

    let text = run(&["lts", file, "RING"], &[]);
    assert_eq!(code(&text), 0);
    assert!(stdout(&text).contains("states 3"), "got:\n{}", stdout(&text));

    let json = run(&["lts", file, "RING", "--format", "json"], &[]);
    assert_eq!(code(&json), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["states"].as_array().unwrap().len(), 3);
    assert_eq!(v["transitions"].as_array().unwrap().len(), 9);

    let dot = run(&["lts", file, "RING", "--format", "dot"], &[]);
    assert_eq!(code(&dot), 0);
    assert!(stdout(&dot).starts_with("digraph"));
}

#[test]
fn exhausted_budget_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_program(dir.path(), PROGRAM);
    let out = run(
        &["lts", path.to_str().unwrap(), "RING", "--budget", "2"],
        &[],
    );
    assert_eq!(code(&out), 2, "stderr: {}", stderr(&out));
}

#[test]
fn incompatible_sorts_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_program(dir.path(), PROGRAM);
    let out = run(&["bisim", path.to_str().unwrap(), "RING", "I"], &[]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("(0,0)"), "stderr: {}", stderr(&out));
}

#[test]
fn parse_errors_exit_one_with_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_program(dir.path(), "signals 0 1;\nmode undirected;\ndef bad : (1,1) = ;\n");
    let out = run(&["check", path.to_str().unwrap()], &[]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("at 3:"), "stderr: {}", stderr(&out));
}

#[test]
fn missing_definition_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_program(dir.path(), PROGRAM);
    let out = run(&["lts", path.to_str().unwrap(), "NOPE"], &[]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("NOPE"));
}

#[test]
fn budget_env_var_applies_and_flag_overrides_it() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_program(dir.path(), PROGRAM);
    let file = path.to_str().unwrap();

    // Env alone: too small, exploration is cut short.
    let cramped = run(&["lts", file, "RING"], &[("WIREC_BUDGET", "2")]);
    assert_eq!(code(&cramped), 2);

    // Flag wins over env.
    let rescued = run(
        &["lts", file, "RING", "--budget", "10000"],
        &[("WIREC_BUDGET", "2")],
    );
    assert_eq!(code(&rescued), 0);

    // Unparsable env value is a usage error.
    let garbage = run(&["lts", file, "RING"], &[("WIREC_BUDGET", "lots")]);
    assert_eq!(code(&garbage), 1);
    assert!(stderr(&garbage).contains("WIREC_BUDGET"));
}

#[test]
fn laws_run_clean_in_both_output_formats() {
    let text = run(&["laws", "--n-max", "1", "--seed", "7", "--sequential"], &[]);
    assert_eq!(code(&text), 0, "stderr: {}", stderr(&text));
    assert!(stdout(&text).contains("0 failures"), "got:\n{}", stdout(&text));

    let json = run(&["laws", "--n-max", "1", "--seed", "7", "--format", "json"], &[]);
    assert_eq!(code(&json), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let all = v.as_array().unwrap();
    assert!(!all.is_empty());
    assert!(all.iter().all(|o| o["ok"] == serde_json::Value::Bool(true)));
}

#[test]
fn star_prints_the_rotated_term_and_sort() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_program(dir.path(), PROGRAM);
    let out = run(&["star", path.to_str().unwrap(), "D"], &[]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("sort: (2,0)"), "got:\n{text}");
    // The cap rotates to the cup: values above the slash, nothing below.
    assert!(text.contains("/ >") || text.contains("/>"), "got:\n{text}");
}

#[test]
fn directed_programs_work_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let text = "signals 0 1;\nmode directed;\n\
        def IL : (L,L) = rec Y : (L,L) . <\\x! / \\x?> . Y;\n\
        def DL : (e,LR) = rec Y : (e,LR) . < / \\x? \\x!> . Y;\n";
    let path = write_program(dir.path(), text);
    let file = path.to_str().unwrap();

    let check = run(&["check", file], &[]);
    assert_eq!(code(&check), 0, "stderr: {}", stderr(&check));
    assert!(stdout(&check).contains("IL : (L,L)"));
    assert!(stdout(&check).contains("DL : (e,LR)"));

    let lts = run(&["lts", file, "DL", "--format", "json"], &[]);
    assert_eq!(code(&lts), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&lts)).unwrap();
    assert_eq!(v["sort"]["left"], serde_json::Value::String("e".into()));
    assert_eq!(v["sort"]["right"], serde_json::Value::String("LR".into()));

    let star = run(&["star", file, "IL"], &[]);
    assert_eq!(code(&star), 0);
    assert!(stdout(&star).contains("sort: (R,R)"), "got:\n{}", stdout(&star));
}
