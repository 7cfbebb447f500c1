//! The `specint` binary: exit codes, output format, diagnostics.

use std::io::Write;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_specint");

const LEFT_LAYER: &str = "\
# (D + 50)u = 50, u(-1) = 0
[operator]
linear = -50

[rhs]
const = 50

[grid]
m = 64

[bc]
at=-1 d0=1 value=0

[exact]
name = left_layer
a = 50
bounds = 0 1
";

fn problem_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".bvp").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn solve_prints_one_csv_row() {
    let f = problem_file(LEFT_LAYER);
    let out = run(&["solve", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "backend,orders,error,grid_error,overshoot");
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&fields[..2], &["spectral", "64"]);
    let err: f64 = fields[2].parse().unwrap();
    assert!(err < 1e-13, "{err:e}");
}

#[test]
fn tolerance_sets_the_exit_code() {
    let f = problem_file(LEFT_LAYER);
    let path = f.path().to_str().unwrap();
    assert_eq!(run(&["solve", path, "--tol", "1e-10"]).status.code(), Some(0));
    let out = run(&["solve", path, "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("tolerance exceeded"));
}

#[test]
fn output_is_deterministic() {
    let f = problem_file(LEFT_LAYER);
    let path = f.path().to_str().unwrap();
    let a = run(&["solve", path, "--backend", "diffmat"]);
    let b = run(&["solve", path, "--backend", "diffmat"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().nth(1).unwrap().starts_with("diffmat,64,"));
}

#[test]
fn timing_goes_to_stderr() {
    let f = problem_file(LEFT_LAYER);
    let out = run(&["solve", f.path().to_str().unwrap(), "--time"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("setup"));
    assert_eq!(stdout(&out).lines().count(), 2);
}

#[test]
fn parse_errors_carry_file_and_line() {
    let text = LEFT_LAYER.replace("linear = -50", "linear = fifty");
    let f = problem_file(&text);
    let path = f.path().to_str().unwrap();
    let out = run(&["solve", path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains(&format!("{path}:3:")), "{}", stderr(&out));
}

#[test]
fn wrong_number_of_conditions() {
    let text = LEFT_LAYER.replace("at=-1 d0=1 value=0", "at=-1 d0=1 value=0\nat=+1 d0=1 value=1");
    let out = run(&["solve", problem_file(&text).path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bc count mismatch"), "{}", stderr(&out));
}

#[test]
fn missing_file_and_unknown_table() {
    assert_eq!(run(&["solve", "/nonexistent/problem.bvp"]).status.code(), Some(2));
    assert_eq!(run(&["tables", "9"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn shipped_fourth_order_problem_parses() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/problems/table1e.bvp");
    let text = std::fs::read_to_string(path).unwrap();
    let spec = specint::app::parse_problem(&text).unwrap();
    let specint::app::OperatorSpec::Factored(op) = spec.operator else { panic!("factored") };
    assert_eq!(op.order(), 4);
    assert_eq!(op.quadratic().len(), 2);
    assert_eq!(spec.bcs.len(), 4);
}

#[test]
fn table_1d() {
    let out = run(&["tables", "1d"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("c,M,error,sampled_error"));
    let row: Vec<&str> = text.lines().nth(3).unwrap().split(',').collect();
    assert_eq!(row[1], "32");
    assert!(row[2].parse::<f64>().unwrap() <= 1e-12);
}

#[test]
fn diag_writes_the_spectrum() {
    let text = "[operator]\nquadratic = 0 -100\n[grid]\nm = 32\n[bc]\nat=-1 d0=1 value=0\nat=+1 d0=1 value=0\n";
    let out = run(&["diag", problem_file(text).path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out).lines().next(), Some("factor,index,sigma,localization"));
    assert!(stderr(&out).contains("condition"));
}
