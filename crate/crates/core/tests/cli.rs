//! The command-line front end, driven in-process.

use std::path::{Path, PathBuf};

use pwl_wardrop::cli::run_cli;
use pwl_wardrop::io::{read_json, CurveFile};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pwl-wardrop").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).to_string_lossy().into_owned()
}

/// A fresh scratch directory per test.
fn scratch(test: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pwl-wardrop-cli-{}-{test}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn solve_to(instance: &str, dir: &Path) -> String {
    let path = dir.join("curve.json").to_string_lossy().into_owned();
    let r = cli(&["solve", instance, "-o", &path]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    path
}

fn error_kind(stderr: &str) -> String {
    let v: serde_json::Value = serde_json::from_str(stderr.trim()).expect("stderr is one JSON object");
    v["error"].as_str().unwrap().to_string()
}

#[test]
fn solve_writes_the_example_curve() {
    let r = cli(&["solve", &data("ex_simple_undirected.json")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let file: CurveFile = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(file.breakpoints, ["0", "2", "11/3", "5"]);
    assert_eq!(file.termination.as_deref(), Some("unbounded"));
    assert!(file.instance.is_some());
}

#[test]
fn solve_csv_and_lambda_max() {
    let r = cli(&["solve", &data("ex_simple_undirected.json"), "--format", "csv", "--lambda-max", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert!(lines[0].starts_with("lambda,"));
    assert_eq!(lines.len(), 1 + 3);
    assert!(lines.last().unwrap().starts_with("3,7/5,7/5,8/5,"));
}

#[test]
fn verbose_statistics() {
    let r = cli(&["--verbose", "solve", &data("ex_ambiguous.json")]);
    assert_eq!(r.code, 0);
    assert!(r.stderr.contains("jumps 1"), "{}", r.stderr);
}

#[test]
fn sample_at_listed_demands() {
    let dir = scratch("sample");
    let curve = solve_to(&data("ex_simple_undirected.json"), &dir);
    let r = cli(&["sample", &curve, "-l", "0,3,7/2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows: Vec<&str> = r.stdout.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("3,7/5,7/5,8/5,0,"));
    let bad = cli(&["sample", &curve, "--lambda=-1"]);
    assert_eq!(bad.code, 2);
    assert_eq!(error_kind(&bad.stderr), "out_of_range");
}

#[test]
fn verify_accepts_solver_output() {
    let dir = scratch("verify");
    for name in ["ex_simple_undirected.json", "ex_ambiguous.json", "braess_j2.json"] {
        let curve = solve_to(&data(name), &dir);
        let r = cli(&["verify", &data(name), &curve, "--oracle"]);
        assert_eq!(r.code, 0, "{name}: {}{}", r.stdout, r.stderr);
        assert!(r.stdout.contains("max gap 0"), "{}", r.stdout);
    }
}

#[test]
fn verify_rejects_a_tampered_curve() {
    let dir = scratch("tampered");
    let curve = solve_to(&data("ex_simple_undirected.json"), &dir);
    let mut file: CurveFile = read_json(Path::new(&curve)).unwrap();
    file.segments[1].flow_slope[2] = "1".into();
    std::fs::write(&curve, serde_json::to_string(&file).unwrap()).unwrap();
    let r = cli(&["verify", &data("ex_simple_undirected.json"), &curve]);
    assert_eq!(r.code, 1, "{}{}", r.stdout, r.stderr);
}

#[test]
fn verify_rejects_a_foreign_instance() {
    let dir = scratch("foreign");
    let curve = solve_to(&data("ex_simple_undirected.json"), &dir);
    let r = cli(&["verify", &data("ex_lexicographic.json"), &curve]);
    assert_eq!(r.code, 2);
    assert_eq!(error_kind(&r.stderr), "parse");
}

#[test]
fn pivot_budget_exit_code() {
    let r = cli(&["solve", &data("braess_j3.json"), "--max-pivots", "3"]);
    assert_eq!(r.code, 4);
    assert_eq!(error_kind(&r.stderr), "budget");
}

#[test]
fn unreadable_input() {
    let dir = scratch("unreadable");
    let r = cli(&["solve", &dir.join("missing.json").to_string_lossy()]);
    assert_eq!(r.code, 2);
    assert_eq!(error_kind(&r.stderr), "io");
    let junk = dir.join("junk.json");
    std::fs::write(&junk, "{\"vertices\": 3}").unwrap();
    let r = cli(&["solve", &junk.to_string_lossy()]);
    assert_eq!(r.code, 2);
    assert_eq!(error_kind(&r.stderr), "parse");
    assert_eq!(cli(&["solve"]).code, 2);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn generate_matches_fixtures() {
    let r = cli(&["generate", "braess", "--j", "2", "--eps", "1/1000000"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let fixture: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(data("braess_j2.json")).unwrap()).unwrap();
    assert_eq!(serde_json::from_str::<serde_json::Value>(&r.stdout).unwrap(), fixture);
    let r = cli(&["generate", "example", "ex_lexicographic"]);
    assert_eq!(r.code, 0);
    let bad = cli(&["generate", "example", "no_such_example"]);
    assert_eq!(bad.code, 2);
    assert_eq!(cli(&["generate", "braess", "--j", "1", "--eps", "0"]).code, 2);
}

#[test]
fn plotdata_breakpoint_rows() {
    let dir = scratch("plot");
    let curve = solve_to(&data("ex_simple_undirected.json"), &dir);
    let r = cli(&["plotdata", &curve, "-s", "x:e3,pi:t"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines[0], "series,lambda,value,lambda_dec,value_dec");
    assert!(lines.contains(&"x:e3,11/3,2,3.66666666666667,2"), "{}", r.stdout);
    assert_eq!(cli(&["plotdata", &curve, "-s", "x:nope"]).code, 2);
}
