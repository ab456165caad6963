//! End-to-end checks of the `hetsearch` binary: exit codes, piped
//! composition, and the artifact-plus-footer output convention.

use std::io::Write;
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_hetsearch");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn hetsearch")
}

fn run_with_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn hetsearch");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().expect("wait for hetsearch")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn gen_pipes_into_lb() {
    let gen = run(&["gen", "tl", "--l", "3"]);
    assert!(gen.status.success());
    let lb = run_with_stdin(&["lb", "-"], &gen.stdout);
    assert!(lb.status.success());
    assert_eq!(stdout_str(&lb), "lb=3\n");
}

#[test]
fn gen_output_parses_despite_footer() {
    let gen = run(&["gen", "hl", "--l", "3", "--m", "2"]);
    assert!(gen.status.success());
    let text = stdout_str(&gen);
    assert!(text.lines().last().unwrap().starts_with("# gen "));
    let g = hetsearch::fileio::parse_tree(&text).expect("artifact with footer parses");
    assert!(g.is_tree());
}

#[test]
fn verify_accepts_witness_and_rejects_monotone_claim() {
    let dir = std::env::temp_dir().join("hetsearch-cli-verify");
    std::fs::create_dir_all(&dir).unwrap();
    let tree = dir.join("tl3.tree");
    let strat = dir.join("tl3.strat");
    let gen = run(&["gen", "tl", "--l", "3", "--strategy-out", strat.to_str().unwrap()]);
    assert!(gen.status.success());
    std::fs::write(&tree, &gen.stdout).unwrap();

    let ok = run(&["verify", tree.to_str().unwrap(), strat.to_str().unwrap()]);
    assert!(ok.status.success());
    assert!(stdout_str(&ok).contains("result=success"));

    let mono = run(&[
        "verify",
        tree.to_str().unwrap(),
        strat.to_str().unwrap(),
        "--monotone",
    ]);
    assert_eq!(mono.status.code(), Some(1));
}

#[test]
fn solve_reports_notfound_below_lower_bound() {
    let gen = run(&["gen", "tl", "--l", "3"]);
    let out = run_with_stdin(&["solve", "-", "--max-k", "2"], &gen.stdout);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout_str(&out).contains("result=notfound"));
}

#[test]
fn reduce_emits_verified_monotone_strategy() {
    let dir = std::env::temp_dir().join("hetsearch-cli-reduce");
    std::fs::create_dir_all(&dir).unwrap();
    let cnf = dir.join("f.cnf");
    let tree = dir.join("f.tree");
    let strat = dir.join("f.strat");
    std::fs::write(&cnf, "p cnf 2 2\n1 -2 0\n2 0\n").unwrap();

    let red = run(&[
        "reduce",
        cnf.to_str().unwrap(),
        "--assignment",
        "11",
        "--strategy-out",
        strat.to_str().unwrap(),
    ]);
    assert!(red.status.success());
    std::fs::write(&tree, &red.stdout).unwrap();

    let ver = run(&[
        "verify",
        tree.to_str().unwrap(),
        strat.to_str().unwrap(),
        "--monotone",
    ]);
    assert!(ver.status.success());
    assert!(stdout_str(&ver).contains("searchers=12"));
}

#[test]
fn reduce_assignment_requires_strategy_out() {
    let dir = std::env::temp_dir().join("hetsearch-cli-usage");
    std::fs::create_dir_all(&dir).unwrap();
    let cnf = dir.join("f.cnf");
    std::fs::write(&cnf, "p cnf 1 1\n1 0\n").unwrap();
    let out = run(&["reduce", cnf.to_str().unwrap(), "--assignment", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_reports_failure_for_partial_strategy() {
    let tree = "tree 3 1\ne 0 1 0\ne 1 2 0\n";
    let strat = "searchers 1\ncolor 0 0\nplace 0 0\nremove 0 0\n";
    let dir = std::env::temp_dir().join("hetsearch-cli-sim");
    std::fs::create_dir_all(&dir).unwrap();
    let sp = dir.join("partial.strat");
    std::fs::write(&sp, strat).unwrap();
    let out = run_with_stdin(&["simulate", "-", sp.to_str().unwrap()], tree.as_bytes());
    assert!(out.status.success());
    assert!(stdout_str(&out).contains("result=failure"));
}

#[test]
fn usage_errors_exit_2() {
    let bad_sub = run(&["frobnicate"]);
    assert_eq!(bad_sub.status.code(), Some(2));
    let missing = run(&["lb", "/nonexistent/tree.file"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn selfcheck_passes() {
    let out = run(&["selfcheck", "--cases", "60"]);
    assert!(out.status.success());
    assert!(stdout_str(&out).contains("result=ok"));
}
