use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_proofbench")).args(args).current_dir(corpus()).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_accepts_corpus_derivation() {
    let o = run(&["check", "jl-knower.drv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).lines().last().unwrap() == "OK: final = false");
}

#[test]
fn check_reports_premise_dependencies() {
    let o = run(&["check", "--quiet", "tk-surprise.drv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "OK: final = ~E2 (from a, phi)");
}

#[test]
fn check_rejects_bad_modus_ponens() {
    let dir = std::env::temp_dir().join(format!("proofbench-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad-mp.drv");
    std::fs::write(&file, "logic: K\npremise a: p\npremise b: q -> r\n1. p ; premise a\n2. q -> r ; premise b\n3. r ; mp 1,2\n")
        .unwrap();
    let o = run(&["check", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("step 3: REJECTED"), "{out}");
    assert!(out.lines().last().unwrap().starts_with("FAIL: step 3:"), "{out}");
}

#[test]
fn retargeted_check_fails() {
    let o = run(&["check", "--quiet", "--logic", "QLP-(FP)", "qlp-examiner.drv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL: step 11:"), "{}", stdout(&o));
}

#[test]
fn model_valid_on_countermodel() {
    let o = run(&["model", "valid", "cm-13.mdl", "fix(d)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "valid");
    let o = run(&["model", "valid", "cm-13.mdl", "~fix(d)"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "not valid");
}

#[test]
fn lift_prints_term_and_checkable_derivation() {
    let o = run(&["transform", "lift", "jd-lemma.drv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("# term: "), "{out}");
    assert!(out.contains("logic: JD"), "{out}");
}

#[test]
fn parse_prints_canonical_form() {
    let o = run(&["parse", "<>p"]);
    assert_eq!(stdout(&o).trim(), "~[]~p");
    let o = run(&["parse", "--logic", "J", "!x:x:p"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fixed_point_axiom_from_the_command_line() {
    let o = run(&["fp", "axiom", "p", "~x:p", "--mode", "justified"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "fix(d) <-> ~x:fix(d)");
}

#[test]
fn corpus_run_passes() {
    let o = run(&["corpus", "run", "--quiet", "--dir", "."]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).trim().ends_with("entries passed"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["check"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn missing_file_is_an_error() {
    let o = run(&["check", "no-such-file.drv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}
