use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn rcrystal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcrystal")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn gen_json_round_trips_through_the_library() {
    let out = rcrystal(&["gen", "--cartan", "A2", "--hw", "inf", "--depth", "3", "--format", "json"]);
    assert!(out.status.success());
    let g = rigged_crystals::explorer::CrystalGraph::from_json(&stdout(&out)).unwrap();
    assert_eq!(g.node_count(), 13);
    assert_eq!(g.edge_count(), 14);
}

#[test]
fn gen_finite_weight_runs_to_completion_without_depth() {
    let out = rcrystal(&["gen", "--cartan", "A2", "--hw", "1,1", "--format", "text"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("nodes: 8\n"), "{text}");
    assert!(text.contains("complete: true"));
}

#[test]
fn gen_dot_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a2.dot");
    let out = rcrystal(&[
        "gen", "--cartan", "A2", "--hw", "inf", "--depth", "2", "--format", "dot", "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let dot = fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 6);
}

#[test]
fn cartan_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g2.json");
    fs::write(&path, r#"{"labels": ["s", "l"], "matrix": [[2, -1], [-3, 2]]}"#).unwrap();
    let out = rcrystal(&["validate", "--cartan", path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["labels"], serde_json::json!(["s", "l"]));
    assert_eq!(v["symmetrizer"], serde_json::json!([3, 1]));
    assert_eq!(v["finite_type"], Value::Bool(true));
}

#[test]
fn fold_reports_all_checks() {
    let out = rcrystal(&["fold", "--cartan", "[[2,-6],[-4,2]]"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("vertices: 10"));
    assert!(text.contains("edges: 24"));
    assert_eq!(text.matches("PASS").count(), 5);
}

#[test]
fn decompose_text_table() {
    let out = rcrystal(&["decompose", "--cartan", "A2", "--mu", "1,0", "--lambda", "1,1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for w in ["2L1+L2", "2L2", "L1"] {
        assert!(text.lines().any(|l| l.split_whitespace().next() == Some(w)), "{text}");
    }
}

#[test]
fn decompose_affine_requires_depth() {
    let out = rcrystal(&["decompose", "--cartan", "A1~", "--mu", "1,0", "--lambda", "0,1"]);
    assert_eq!(out.status.code(), Some(1));
    let out = rcrystal(&["decompose", "--cartan", "A1~", "--mu", "1,0", "--lambda", "0,1", "--depth", "4", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["partial"], Value::Bool(true));
}

#[test]
fn virtcheck_passes_on_non_simply_laced_types() {
    for cartan in ["B2", "C3", "G2", "F4", "[[2,-6],[-4,2]]"] {
        let out = rcrystal(&["virtcheck", "--cartan", cartan, "--depth", "4"]);
        assert!(out.status.success(), "{cartan}");
        assert!(stdout(&out).contains("violations: 0"));
    }
}

#[test]
fn exit_codes() {
    // domain errors
    assert_eq!(rcrystal(&["validate", "--cartan", "[[2,1],[-1,2]]"]).status.code(), Some(1));
    assert_eq!(rcrystal(&["validate", "--cartan", "[[2,-1],[0,2]]"]).status.code(), Some(1));
    assert_eq!(rcrystal(&["validate", "--cartan", "Q7"]).status.code(), Some(1));
    assert_eq!(rcrystal(&["gen", "--cartan", "A2", "--hw", "-1,0"]).status.code(), Some(1));
    // usage errors
    assert_eq!(rcrystal(&["gen", "--cartan", "A2", "--hw", "inf"]).status.code(), Some(2));
    assert_eq!(rcrystal(&["gen", "--cartan", "A2", "--hw", "1"]).status.code(), Some(2));
    assert_eq!(rcrystal(&["gen", "--cartan", "A2", "--hw", "x,y"]).status.code(), Some(2));
    assert_eq!(rcrystal(&["decompose", "--cartan", "A2", "--mu", "1,0,0", "--lambda", "1,1"]).status.code(), Some(2));
    assert_eq!(rcrystal(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(rcrystal(&["gen", "--cartan", "A2"]).status.code(), Some(2));
}

#[test]
fn shipped_matrices_pass_virtcheck_and_fold() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/matrices");
    let mut paths: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    assert!(paths.len() >= 8);
    for path in &paths {
        let p = path.to_str().unwrap();
        let out = rcrystal(&["virtcheck", "--cartan", p, "--depth", "5"]);
        assert_eq!(out.status.code(), Some(0), "virtcheck {p}: {}", String::from_utf8_lossy(&out.stderr));
        let out = rcrystal(&["fold", "--cartan", p]);
        assert_eq!(out.status.code(), Some(0), "fold {p}: {}", stdout(&out));
    }
}
