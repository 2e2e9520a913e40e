use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn dkgraph(args: &[&str]) -> Output {
    let args: Vec<String> = args
        .iter()
        .map(|a| if a.ends_with(".edges") { data(a).display().to_string() } else { a.to_string() })
        .collect();
    Command::new(env!("CARGO_BIN_EXE_dkgraph")).args(&args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = dkgraph(args);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn stats_on_four_node_example() {
    let v = json(&["stats", "--graph", "example.edges"]);
    assert_eq!(v["degree_vector"], serde_json::json!([0, 1, 2, 1]));
    assert_eq!(v["bi_degree_vector"], serde_json::json!([0, 0, 1, 1, 2, 0]));
    assert_eq!(v["edges_from_degrees"], 4);
    assert_eq!(v["scaled_bi_degree_sum"], "4");
}

#[test]
fn psi_of_zero_parameters_is_log_eight() {
    let v = json(&["psi", "--model", "1k", "--n", "3", "--alpha", "0,0"]);
    assert!((v["psi"].as_f64().unwrap() - 8f64.ln()).abs() < 1e-12);
}

#[test]
fn psi_accepts_negative_infinity() {
    let v = json(&["psi", "--model", "1k", "--n", "3", "--alpha", "-inf,0"]);
    assert_eq!(v["alpha"][0], "-inf");
    // graphs without isolated nodes survive: three paths and the triangle
    assert!((v["psi"].as_f64().unwrap() - 4f64.ln()).abs() < 1e-12);
}

#[test]
fn fit_2k_triangle_and_path() {
    let v = json(&["fit", "--model", "2k", "--obs", "tri.edges", "path.edges"]);
    assert_eq!(v["exists"], true);
    assert_eq!(v["alpha"][0], "-inf");
    assert!(v["moment_residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn fit_1k_schema() {
    let v = json(&["fit", "--model", "1k", "--obs", "tri.edges", "path.edges", "edge.edges", "--tol", "1e-10", "--json"]);
    assert_eq!(v["exists"], true);
    assert_eq!(v["alpha"].as_array().unwrap().len(), 2);
    assert!(v["iterations"].as_u64().unwrap() > 0);
    assert!(v["moment_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn require_exists_fails_on_single_observation() {
    let o = dkgraph(&["fit", "--model", "1k", "--obs", "tri.edges", "--require-exists"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exists"], false);
}

#[test]
fn exists_names_failed_clause() {
    let v = json(&["exists", "--model", "1k", "--obs", "tri.edges", "path.edges"]);
    assert_eq!(v["exists"], false);
    assert_eq!(v["failed"][0]["clause"], "zero-coordinate");
    assert_eq!(v["failed"][0]["k"], 0);
    assert_eq!(v["hull_check"], false);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["psi", "--model", "1k", "--n", "3", "--alpha", "0"][..],
        &["psi", "--model", "3k", "--n", "3"],
        &["construct", "regular", "--n", "5"],
        &["experiment", "fig4", "--n", "5"],
        &["fit", "--model", "1k"],
        &[],
    ] {
        assert_eq!(dkgraph(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_one() {
    let malformed = dkgraph(&["stats", "--graph", "bad.edges"]);
    assert_eq!(malformed.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&malformed.stderr).contains("line 3"));
    assert_eq!(dkgraph(&["stats", "--graph", "missing.edges"]).status.code(), Some(1));
    assert_eq!(dkgraph(&["enumerate", "--n", "8"]).status.code(), Some(1));
    assert_eq!(dkgraph(&["construct", "regular", "--n", "5", "--k", "3"]).status.code(), Some(1));
    // isolated node is outside the 2K support
    assert_eq!(
        dkgraph(&["stats", "--graph", "edge.edges", "--model", "2k", "--alpha", "0,0"]).status.code(),
        Some(1)
    );
}

#[test]
fn construct_round_trips_through_stats() {
    let o = dkgraph(&["construct", "regular", "--n", "7", "--k", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reg.edges");
    std::fs::write(&path, &o.stdout).unwrap();
    let v = json(&["stats", "--graph", path.to_str().unwrap()]);
    assert_eq!(v["degree_vector"], serde_json::json!([0, 0, 0, 0, 7, 0, 0]));
}

#[test]
fn greedy_bound_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bound.csv");
    let o = dkgraph(&["experiment", "fig4", "--nmax", "200", "--step", "10", "--csv", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,count,ratio"));
    assert_eq!(lines.count(), 20);
}

#[test]
fn experiment_output_is_byte_identical() {
    let args = ["experiment", "prop5", "--n", "21,31", "--trials", "50", "--seed", "7", "--c", "1", "--sequence", "sqrt-n"];
    let a = dkgraph(&args);
    let b = dkgraph(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = dkgraph(&["experiment", "prop5", "--n", "21,31", "--trials", "50", "--seed", "8", "--c", "1", "--sequence", "sqrt-n"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn help_lists_csv_columns() {
    let o = dkgraph(&["experiment", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("n,count,ratio"));
}
