use std::path::{Path, PathBuf};
use std::process::Command;

use pclf_cli::{dispatch, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK};
use pclf_core::io::{graph_from_json, graph_to_json, matrices_to_json};
use pclf_core::lifts::{de_bruijn, max_lift};
use pclf_core::{LabeledGraph, MatrixSet};
use tempfile::TempDir;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pclf").chain(args.iter().copied());
    let code = dispatch(argv, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn g2() -> LabeledGraph {
    LabeledGraph::from_atoms(2, &["a", "b"], &[("a", "a", 1), ("a", "b", 1), ("b", "a", 2), ("b", "b", 2)]).unwrap()
}

fn pair() -> MatrixSet {
    MatrixSet::from_rows(&[
        vec![vec![0.2, 0.0, 0.0], vec![0.6, 0.6, 0.5], vec![0.6, 0.3, 0.2]],
        vec![vec![0.1, 0.2, 0.3], vec![0.2, 0.0, 0.5], vec![0.1, 0.6, 0.7]],
    ])
    .unwrap()
}

#[test]
fn check_reports_path_completeness() {
    let dir = TempDir::new().unwrap();
    let g0 = write(&dir, "g0.json", r#"{"alphabet": 2, "nodes": ["a"], "edges": [["a", "a", 1], ["a", "a", 2]]}"#);
    let r = run(&["check", s(&g0)]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.starts_with("path-complete: true\n"), "{}", r.out);

    let broken = write(&dir, "one.json", r#"{"alphabet": 2, "nodes": ["a"], "edges": [["a", "a", 1]]}"#);
    let r = run(&["check", s(&broken)]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    assert!(r.out.contains("path-complete: false"));
    assert!(r.out.contains("no path-complete components"));
}

#[test]
fn lift_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g2.json", &graph_to_json(&g2()));
    for kind in ["sum:2", "max", "min", "comp", "backcomp"] {
        let r = run(&["lift", s(&g), "--kind", kind, "--format", "json"]);
        assert_eq!(r.code, EXIT_OK, "{kind}: {}", r.err);
        let parsed = graph_from_json(&r.out).unwrap();
        let expected = kind.parse::<pclf_core::LiftKind>().unwrap().apply(&g2()).unwrap();
        assert_eq!(parsed, expected);
    }
    let r = run(&["lift", s(&g), "--kind", "max", "--format", "json"]);
    assert_eq!(graph_from_json(&r.out).unwrap(), max_lift(&g2()).unwrap());

    let r = run(&["lift", "--kind", "debruijn:2,3", "--format", "json"]);
    assert_eq!(graph_from_json(&r.out).unwrap(), de_bruijn(2, 3).unwrap());
}

#[test]
fn simulate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let g1 = write(
        &dir,
        "g1.json",
        r#"{"alphabet": 2, "nodes": ["p", "q", "r"],
            "edges": [["p","q",1],["q","p",1],["q","p",2],["q","r",1],["q","r",2],["r","q",2]]}"#,
    );
    let g2 = write(&dir, "g2.json", &graph_to_json(&g2()));
    let r = run(&["simulate", s(&g1), s(&g2), "--format", "json"]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    let value: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(value["simulates"], false);

    let r = run(&["simulate", s(&g2), s(&g2)]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.starts_with("simulates: true"));
}

#[test]
fn bound_prints_rate() {
    let dir = TempDir::new().unwrap();
    let g0 = write(&dir, "g0.json", r#"{"alphabet": 2, "nodes": ["a"], "edges": [["a", "a", 1], ["a", "a", 2]]}"#);
    let a = write(&dir, "pair.json", &matrices_to_json(&pair()));
    let r = run(&["bound", s(&g0), s(&a), "--flavor", "dual"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.contains("rho: 1.34100"), "{}", r.out);

    let r = run(&["bound", s(&g0), s(&a), "--flavor", "primal", "--format", "json", "--tol", "1e-8"]);
    let value: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert!((value["rho"].as_f64().unwrap() - 1.27542).abs() < 1e-5);
    assert_eq!(value["certificate"]["flavor"], "primal");
}

#[test]
fn hierarchy_csv_schema() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "pair.json", &matrices_to_json(&pair()));
    let r = run(&["hierarchy", s(&a), "--lmax", "4", "--eps", "0"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines[0], "step,kind,level,rho_G,lower,upper");
    assert_eq!(lines.len(), 9);
    assert!(lines[1].starts_with("(1),dual,1,"));
    assert!(lines[2].starts_with("(1)ᵈ,primal,1,"));

    let r = run(&["hierarchy", s(&a), "--lmax", "4", "--eps", "0", "--max-nodes", "4"]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("cap"), "{}", r.err);
}

#[test]
fn oracle_reports_bounds() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "pair.json", &matrices_to_json(&pair()));
    let r = run(&["oracle", s(&a), "--depth", "8", "--format", "json"]);
    assert_eq!(r.code, EXIT_OK);
    let value: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert!((value["lower"].as_f64().unwrap() - 1.069913).abs() < 1e-5);

    let r = run(&["oracle", s(&a), "--depth", "30"]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("cap"), "{}", r.err);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\"alphabet\": 2,\n \"nodes\": [\"a\"],\n \"edges\": [[\"a\", \"a\"]]}");
    let r = run(&["check", s(&bad)]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("line 3"), "{}", r.err);

    let r = run(&["check", "/nonexistent/graph.json"]);
    assert_eq!(r.code, EXIT_INPUT);

    let g = write(&dir, "g2.json", &graph_to_json(&g2()));
    assert_eq!(run(&["lift", s(&g), "--kind", "sideways"]).code, EXIT_INPUT);
    assert_eq!(run(&["lift", "--kind", "max"]).code, EXIT_INPUT);
    assert_eq!(run(&["lift", "--kind", "debruijn:2"]).code, EXIT_INPUT);
    assert_eq!(run(&["oracle", s(&g), "--format", "csv"]).code, EXIT_INPUT);
    assert_eq!(run(&["frobnicate"]).code, EXIT_INPUT);
    assert_eq!(run(&["--help"]).code, EXIT_OK);

    let mismatched = write(&dir, "one.json", r#"{"n": 1, "matrices": [[[0.5]]]}"#);
    let r = run(&["bound", s(&g), s(&mismatched), "--flavor", "dual"]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.err.contains("alphabet"), "{}", r.err);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g2.json", &graph_to_json(&g2()));
    let a = write(&dir, "two.json", r#"{"n": 2, "matrices": [[[0.3, 0.9], [0.1, 0.2]], [[0.5, 0.0], [0.7, 0.6]]]}"#);
    let commands: Vec<Vec<&str>> = vec![
        vec!["check", s(&g), "--format", "json"],
        vec!["lift", s(&g), "--kind", "sum:3"],
        vec!["bound", s(&g), s(&a), "--flavor", "dual", "--format", "json"],
        vec!["hierarchy", s(&a), "--lmax", "3", "--format", "json"],
        vec!["oracle", s(&a)],
    ];
    for args in commands {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.code, second.code);
        assert_eq!(first.out, second.out, "{args:?}");
    }
}

#[test]
fn binary_writes_to_stdout() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g2.json", &graph_to_json(&g2()));
    let output = Command::new(env!("CARGO_BIN_EXE_pclf")).args(["check", s(&g)]).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8(output.stdout).unwrap().starts_with("path-complete: true"));
    let output = Command::new(env!("CARGO_BIN_EXE_pclf")).args(["check", "missing.json"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8(output.stderr).unwrap().starts_with("error:"));
}
