use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use isci_core::{compute_bounds, Graph, Normal, SolverOptions, Weights};
use isci_sim::{run_scenario, write_result_csv, Scenario};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect()
}

fn isci(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isci"))
        .args(args)
        .env_remove("ISCI_THREADS")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_efficacy_safety_graph() {
    let o = isci(&["validate", s(&fixture("efficacy_safety6.json"))]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("valid, complete"));
}

#[test]
fn validate_reports_bad_row_sum() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "g.json",
        r#"{"labels":["A","B"],"alpha":0.025,"initial_levels":[0.0125,0.0125],
            "transitions":[[0,1.2],[1,0]]}"#,
    );
    let o = isci(&["validate", &g]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("invalid"));
}

#[test]
fn validate_missing_or_broken_file() {
    assert_eq!(code(&isci(&["validate", "/nonexistent/graph.json"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", "{not json");
    assert_eq!(code(&isci(&["validate", &g])), 2);
}

#[test]
fn bounds_match_library_call() {
    let o = isci(&[
        "bounds",
        s(&fixture("holm2.json")),
        s(&fixture("holm2_estimates.json")),
        "--q",
        "0.5",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["method"], "isci");

    let g: Graph = serde_json::from_str(&std::fs::read_to_string(fixture("holm2.json")).unwrap())
        .unwrap();
    let models = [Normal::new(2.8, 1.0).unwrap(), Normal::new(2.4, 1.0).unwrap()];
    let (b, tr) =
        compute_bounds(&g, &models, &Weights::Uniform(0.5), &SolverOptions::default()).unwrap();
    let l: Vec<f64> = v["L"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(l, b.lower);
    assert_eq!(v["iterations"].as_u64().unwrap() as usize, tr.iterations);
    let rej: Vec<usize> = v["rejected"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap() as usize)
        .collect();
    assert_eq!(rej, b.rejected());
}

#[test]
fn bonferroni_ignores_q_with_warning() {
    let o = isci(&[
        "bounds",
        s(&fixture("holm2.json")),
        s(&fixture("holm2_estimates.json")),
        "--method",
        "bonferroni",
        "--q",
        "0.5",
    ]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("ignored"));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let z = 2.241402727604945;
    assert!((v["L"][0].as_f64().unwrap() - (2.8 - z)).abs() < 1e-12);
}

#[test]
fn fallback_and_csci_methods() {
    let dir = tempfile::tempdir().unwrap();
    let est = write(dir.path(), "e.json", r#"{"estimates":[3.0,2.5,0.1],"se":[1,1,1]}"#);
    let o = isci(&["bounds", s(&fixture("fallback3.json")), &est, "--method", "fallback", "--q", "0.3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = isci(&["bounds", s(&fixture("fallback3.json")), &est, "--method", "csci"]);
    assert_eq!(code(&o), 0);
    // a Holm graph is not a fallback chain
    let o = isci(&["bounds", s(&fixture("holm2.json")), s(&fixture("holm2_estimates.json")), "--method", "fallback", "--q", "0.3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn minus_infinity_is_printed_as_string() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "g.json",
        r#"{"labels":["E","S"],"alpha":0.025,"initial_levels":[0.025,0.0],
            "transitions":[[0,1],[1,0]]}"#,
    );
    let est = write(dir.path(), "e.json", r#"{"estimates":[0.5,3.0],"se":[1,1],"q":{"uniform":0.5}}"#);
    let o = isci(&["bounds", &g, &est]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["L"][1], "-inf");
}

#[test]
fn bounds_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let est = write(dir.path(), "e.json", r#"{"estimates":[1.0,2.0,3.0],"se":[1,1,1]}"#);
    let o = isci(&["bounds", s(&fixture("holm2.json")), &est, "--q", "0.5"]);
    assert_eq!(code(&o), 2);
    // isci without any q
    let o = isci(&["bounds", s(&fixture("holm2.json")), s(&fixture("holm2_estimates.json"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn non_convergence_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let est = write(dir.path(), "e.json", r#"{"estimates":[3,3.2,2.9,3.5,2.7],"se":[1,1,1,1,1]}"#);
    let o = isci(&[
        "bounds",
        s(&fixture("holm5.json")),
        &est,
        "--q",
        "0.5",
        "--max-iter",
        "1",
    ]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no convergence"));
}

#[test]
fn simulate_is_deterministic_and_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let sc = fixture("rely_scenario1.json");
    let o = isci(&["simulate", s(&sc), "--n-sims", "300", "--seed", "5", "--out", s(&a), "--threads", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = Command::new(env!("CARGO_BIN_EXE_isci"))
        .args(["simulate", s(&sc), "--n-sims", "300", "--seed", "5", "--out", s(&b)])
        .env("ISCI_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let ca = std::fs::read_to_string(a.join("rely_scenario1.csv")).unwrap();
    let cb = std::fs::read_to_string(b.join("rely_scenario1.csv")).unwrap();
    assert_eq!(ca, cb);

    let mut scen = Scenario::from_json(&std::fs::read_to_string(&sc).unwrap()).unwrap();
    scen.n_sims = 300;
    scen.seed = 5;
    let mut lib = Vec::new();
    write_result_csv(&mut lib, &run_scenario(&scen).unwrap()).unwrap();
    assert_eq!(ca, String::from_utf8(lib).unwrap());
}

#[test]
fn simulate_curve_mode() {
    let dir = tempfile::tempdir().unwrap();
    let o = isci(&[
        "simulate",
        s(&fixture("holm5_tradeoff.json")),
        "--n-sims",
        "100",
        "--curve",
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let curve = std::fs::read_to_string(dir.path().join("holm5_tradeoff_curve.csv")).unwrap();
    assert_eq!(curve.lines().count(), 1 + 7);
}

#[test]
fn simulate_rejects_invalid_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "s.json", r#"{"graph": {}}"#);
    assert_eq!(code(&isci(&["simulate", &p, "--out", s(dir.path())])), 2);
}

#[test]
fn calibrate_reproduces_design() {
    let o = isci(&["calibrate", "--alpha", "0.0125", "--delta", "0.3784364357202101", "--effect", "0.492"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["information"].as_f64().unwrap() - 66.37).abs() < 0.01);
    assert!((v["alpha_effect"].as_f64().unwrap() - 0.00077).abs() < 1e-5);
    assert!((v["q"].as_f64().unwrap() - 0.00063).abs() < 2e-5);
    assert_eq!(code(&isci(&["calibrate", "--alpha", "1.5", "--delta", "0.3"])), 2);
}
