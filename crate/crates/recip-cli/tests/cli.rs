//! End-to-end tests of the `recip` binary: report formats, exit codes,
//! determinism, and the oracle cross-checks behind `--verify`.

use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_recip"))
}

fn write_doc(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

const DEMO: &str = r#"{"A": [[3, -1, -2], [-1, 1, -1]], "b": [0, 0]}"#;
const DEMO_R_FALSE: &str = r#"{"A": [[3, -1, -2], [-1, 1, -1]], "b": [-4, -2]}"#;
const PAIR: &str = r#"{"A": [[1, -1]], "b": [0]}"#;

#[test]
fn ct_reports_the_solution_series_and_verifies() {
    let dir = TempDir::new().unwrap();
    let input = write_doc(&dir, "demo.json", DEMO);
    let out = bin().args(["ct", "--input"]).arg(&input).args(["--degree", "12", "--verify"]).output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("system: 2 equations, 3 unknowns, rhs (0, 0)\norder: case1\n"));
    assert!(text.contains("series[12] = 1 + x1^3 x2^5 x3^2\n"), "got: {text}");
    assert!(text.contains("verify: enumeration agrees up to total degree 12\n"));
}

#[test]
fn ct_of_a_balanced_pair_is_a_single_geometric_factor() {
    let dir = TempDir::new().unwrap();
    let input = write_doc(&dir, "pair.json", PAIR);
    let out = bin().args(["ct", "--input"]).arg(&input).output().unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("E = 1 / [(1 - x1 x2)]\n"));
}

#[test]
fn ebar_counts_strict_solutions_of_the_negated_system() {
    let dir = TempDir::new().unwrap();
    let input = write_doc(&dir, "demo.json", DEMO);
    let out = bin().args(["ebar", "--input"]).arg(&input).args(["--degree", "12", "--verify"]).output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("series[12] = x1^3 x2^5 x3^2\n"), "got: {text}");
    assert!(text.contains("verify: enumeration agrees up to total degree 12\n"));
}

#[test]
fn recip_holds_on_the_reference_point_and_shows_both_constant_terms() {
    let dir = TempDir::new().unwrap();
    let input = write_doc(&dir, "demo.json", DEMO);
    let out = bin().args(["recip", "--input"]).arg(&input).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("R: holds\n"));
    assert!(text.contains("sign: (-1)^2\n"));
    assert!(text.contains("ct = "));
    assert!(text.contains("ct_reversed = "));
}

#[test]
fn assert_flag_turns_a_failing_condition_into_exit_one() {
    let dir = TempDir::new().unwrap();
    let input = write_doc(&dir, "rfalse.json", DEMO_R_FALSE);
    let plain = bin().args(["recip", "--input"]).arg(&input).output().unwrap();
    assert!(plain.status.success());
    assert!(stdout(&plain).contains("R: fails\n"));
    let asserted = bin().args(["recip", "--input"]).arg(&input).arg("--assert").output().unwrap();
    assert_eq!(asserted.status.code(), Some(1));
    // The assertion changes only the exit code, never the report.
    assert_eq!(stdout(&plain), stdout(&asserted));
}

#[test]
fn iprop_reports_the_failing_stage_one_based() {
    let dir = TempDir::new().unwrap();
    let input = write_doc(&dir, "rfalse.json", DEMO_R_FALSE);
    let out = bin().args(["iprop", "--input"]).arg(&input).output().unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("I: fails at stage 1 (mode sum)\n"));
    let asserted = bin().args(["iprop", "--input"]).arg(&input).arg("--assert").output().unwrap();
    assert_eq!(asserted.status.code(), Some(1));
}

#[test]
fn monster_lists_the_harvested_equations() {
    let dir = TempDir::new().unwrap();
    let input = write_doc(&dir, "demo.json", DEMO);
    let out = bin().args(["monster", "--input"]).arg(&input).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("criterion: established\n"));
    assert!(text.contains("[1] columns <>: 3 a1 - a2 - 2 a3 = 0 : R holds\n"), "got: {text}");
    assert!(text.contains("[2] columns <1>: 2 a2 - 5 a3 = 0 : R holds\n"), "got: {text}");
}

#[test]
fn error_terms_verify_the_correction_identity() {
    let dir = TempDir::new().unwrap();
    let input = write_doc(&dir, "demo.json", DEMO);
    let out = bin().args(["error-terms", "--input"]).arg(&input).output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("E0 = "));
    assert!(text.contains("E1 = "));
    assert!(text.contains("identity: verified\n"));
}

#[test]
fn grid_emits_a_tsv_with_summary_counts() {
    let dir = TempDir::new().unwrap();
    let input =
        write_doc(&dir, "grid.json", r#"{"A": [[3, -1, -2], [-1, 1, -1]], "b_ranges": [[-1, 1], [-1, 1]]}"#);
    let out = bin().args(["grid", "--input"]).arg(&input).output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("b\tc\tR\tI\tmonster\n"));
    assert!(text.contains("# total\t9\n"));
    assert!(text.contains("0\t0\t1\t1\t1\n"));
    assert!(text.contains("# errors\t0\n"));
}

#[test]
fn grid_is_byte_identical_across_worker_counts() {
    let dir = TempDir::new().unwrap();
    let input =
        write_doc(&dir, "grid.json", r#"{"A": [[3, -1, -2], [-1, 1, -1]], "b_ranges": [[-2, 2], [-2, 2]]}"#);
    let one = bin().args(["grid", "--input"]).arg(&input).args(["--jobs", "1"]).output().unwrap();
    let many = bin().args(["grid", "--input"]).arg(&input).args(["--jobs", "7"]).output().unwrap();
    assert!(one.status.success() && many.status.success());
    assert_eq!(stdout(&one), stdout(&many));
}

#[test]
fn grid_with_an_empty_range_prints_only_headers() {
    let dir = TempDir::new().unwrap();
    let input =
        write_doc(&dir, "empty.json", r#"{"A": [[3, -1, -2], [-1, 1, -1]], "b_ranges": [[2, 1], [0, 3]]}"#);
    let out = bin().args(["grid", "--input"]).arg(&input).output().unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("b\tc\tR\tI\tmonster\n# total\t0\n"));
}

#[test]
fn enumerate_lists_both_solution_sets_as_json() {
    let dir = TempDir::new().unwrap();
    let input = write_doc(&dir, "demo.json", DEMO);
    let out = bin().args(["enumerate", "--input"]).arg(&input).args(["--degree", "10"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{\"nonnegative\":[[0,0,0],[3,5,2]],\"strict\":[[3,5,2]]}\n");
}

#[test]
fn feasible_finds_a_positive_kernel_witness_or_exits_one() {
    let dir = TempDir::new().unwrap();
    let yes = write_doc(&dir, "demo.json", DEMO);
    let out = bin().args(["feasible", "--input"]).arg(&yes).output().unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("feasible: yes\nwitness = (3, 5, 2)\n"));

    let no = write_doc(&dir, "no.json", r#"{"A": [[1, 1]], "b": [0]}"#);
    let plain = bin().args(["feasible", "--input"]).arg(&no).output().unwrap();
    assert!(plain.status.success());
    assert!(stdout(&plain).contains("feasible: no\n"));
    let asserted = bin().args(["feasible", "--input"]).arg(&no).arg("--assert").output().unwrap();
    assert_eq!(asserted.status.code(), Some(1));
}

#[test]
fn hadamard_takes_expressions_and_knows_the_classical_identities() {
    let out = bin().args(["hadamard", "1/(1-x)", "1/(1-x)"]).output().unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("product = 1 / [(1 - x1)]\n"));

    let squares =
        bin().args(["hadamard", "1/(1-x)^2", "1/(1-x)^2", "--verify"]).output().unwrap();
    assert!(squares.status.success());
    let text = stdout(&squares);
    assert!(text.contains("series[8] = 1 + 4 x1 + 9 x1^2 + 16 x1^3"), "got: {text}");
    assert!(text.contains("verify: coefficientwise product agrees"));

    // The Unicode minus sign is accepted.
    let unicode = bin().args(["hadamard", "1/(1\u{2212}x)", "1/(1\u{2212}x)"]).output().unwrap();
    assert!(unicode.status.success());
}

#[test]
fn hadamard_rejects_unknown_variables_and_bad_divisors() {
    let unknown = bin().args(["hadamard", "1/(1-q)", "1"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(2));
    assert!(stderr(&unknown).contains("unknown variable"));

    let divisor = bin().args(["hadamard", "1/(2-x)", "1"]).output().unwrap();
    assert_eq!(divisor.status.code(), Some(2));
}

#[test]
fn malformed_documents_exit_two_with_a_diagnostic() {
    let dir = TempDir::new().unwrap();
    let bad = write_doc(&dir, "bad.json", r#"{"A": "nope"}"#);
    let out = bin().args(["ct", "--input"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("error:"));

    let missing = dir.path().join("missing.json");
    let gone = bin().args(["ct", "--input"]).arg(&missing).output().unwrap();
    assert_eq!(gone.status.code(), Some(2));
}

#[test]
fn exhausting_the_term_budget_exits_three() {
    let dir = TempDir::new().unwrap();
    let input = write_doc(&dir, "demo.json", DEMO);
    let out = bin().args(["ct", "--input"]).arg(&input).args(["--budget", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("term budget"));
}

#[test]
fn selfcheck_passes_and_reports_every_battery() {
    let out = bin().args(["selfcheck"]).output().unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("stanley-invariant: 100 passed, 0 failed\n"));
    assert!(text.contains("proper-reciprocity: 100 passed, 0 failed\n"));
    assert!(text.contains("matrix-operations: pass\n"));
    assert!(text.contains("hadamard-identities: pass\n"));
    assert!(text.ends_with("selfcheck: ok\n"));
}

#[test]
fn reports_are_deterministic_and_respect_output_redirection() {
    let dir = TempDir::new().unwrap();
    let input = write_doc(&dir, "demo.json", DEMO);
    let a = bin().args(["ct", "--input"]).arg(&input).output().unwrap();
    let b = bin().args(["ct", "--input"]).arg(&input).output().unwrap();
    assert_eq!(stdout(&a), stdout(&b));

    let file = dir.path().join("report.txt");
    let redirected =
        bin().args(["ct", "--input"]).arg(&input).args(["--output"]).arg(&file).output().unwrap();
    assert!(redirected.status.success());
    assert!(stdout(&redirected).is_empty());
    assert_eq!(std::fs::read_to_string(&file).unwrap(), stdout(&a));
}

#[test]
fn reversed_order_flips_the_expansion_but_not_the_verdict() {
    let dir = TempDir::new().unwrap();
    let input = write_doc(&dir, "demo.json", DEMO);
    let forward = bin().args(["recip", "--input"]).arg(&input).output().unwrap();
    let reversed = bin().args(["recip", "--input"]).arg(&input).arg("--reversed").output().unwrap();
    assert!(forward.status.success() && reversed.status.success());
    assert!(stdout(&forward).contains("R: holds\n"));
    assert!(stdout(&reversed).contains("R: holds\n"));
    assert!(stdout(&reversed).contains("order: case1 (reversed)\n"));
}
