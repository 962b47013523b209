//! The binary end to end: exit codes, artifacts, reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn solab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solab")).args(args).env_remove("SOLAB_TOL").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn verdict<'a>(v: &'a Value, check: &str) -> &'a Value {
    v["verdicts"].as_array().unwrap().iter().find(|x| x["check"] == check).unwrap_or_else(|| panic!("no {check}"))
}

#[test]
fn heisenberg_eval_reports_f() {
    let out = solab(&["heisenberg", "eval", "--n", "1", "--phi", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["data"]["F"].as_f64().unwrap() - 0.5284822).abs() < 1e-7);
    for x in v["verdicts"].as_array().unwrap() {
        for key in ["check", "value", "bound", "tolerance", "pass"] {
            assert!(x.get(key).is_some(), "{key} missing from {x}");
        }
    }
}

#[test]
fn heisenberg_verify_passes() {
    let out = solab(&["heisenberg", "verify", "--n", "1", "--phi-min", "0.01", "--phi-max", "50", "--samples", "200"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["pass"], true);
}

#[test]
fn bounds_are_seeded_and_reproducible() {
    let args = ["--seed", "7", "heisenberg", "bounds", "--n", "1", "--samples", "2000"];
    let a = solab(&args);
    let b = solab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let inf = verdict(&v, "sec-inf")["value"].as_f64().unwrap();
    let sup = verdict(&v, "sec-sup")["value"].as_f64().unwrap();
    assert!(inf > -2.0 / 3.0 && sup < 0.0 && inf < sup);
}

#[test]
fn csv_format() {
    // Commands with a table emit it; the others emit their verdicts.
    let read = |args: &[&str]| {
        let out = solab(args);
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(!text.contains("\r\n"));
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
        let rows: Vec<Vec<String>> = rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
        (headers, rows)
    };
    let (h, rows) = read(&["--format", "csv", "heisenberg", "curvature", "--n", "2"]);
    assert_eq!(h[0], "phi");
    assert!(!rows.is_empty());
    for r in &rows {
        for x in r {
            assert!(x.parse::<f64>().unwrap() < f64::INFINITY);
        }
    }
    let (h, rows) = read(&["--format", "csv", "heisenberg", "bounds", "--n", "1", "--samples", "100"]);
    assert_eq!(h, ["check", "value", "bound", "tolerance", "pass"]);
    assert!(rows.iter().all(|r| r[1].parse::<f64>().is_ok() && r[4] == "true"));
}

#[test]
fn output_and_table_files() {
    let dir = tempfile::tempdir().unwrap();
    let main = dir.path().join("verdict.json");
    let table = dir.path().join("trajectory.csv");
    let out = solab(&[
        "--output",
        main.to_str().unwrap(),
        "--csv",
        table.to_str().unwrap(),
        "e2",
        "integrate",
        "--q",
        "1",
        "--delta",
        "1e-8",
        "--epsilon",
        "zero",
        "--b-max",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&main).unwrap()).unwrap();
    assert_eq!(verdict(&v, "case3")["pass"], true);
    assert_eq!(verdict(&v, "lemma-identities")["pass"], true);
    let mut rdr = csv::Reader::from_path(&table).unwrap();
    let headers = rdr.headers().unwrap().clone();
    let b_col = headers.iter().position(|h| h == "b").expect("b column");
    let bs: Vec<f64> = rdr.records().map(|r| r.unwrap()[b_col].parse().unwrap()).collect();
    assert!(bs.len() > 100);
    assert!(bs.windows(2).all(|w| w[1] > w[0]));
    assert!(*bs.last().unwrap() >= 1000.0 * (1.0 - 1e-9));
}

#[test]
fn e2_verify_with_bump() {
    let out = solab(&["e2", "verify", "--q", "1", "--epsilon", "quadratic-bump"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn inadmissible_epsilon_exits_3() {
    let out = solab(&["e2", "integrate", "--q", "1", "--epsilon", &data("bad_epsilon.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("epsilon(0) = 0"));
}

#[test]
fn shipped_frames_pass() {
    for f in ["heisenberg_frame.json", "heisenberg_n3_frame.json", "e2_frame.json", "steady_frame.json"] {
        let out = solab(&["frame", "check", "--spec", &data(f)]);
        assert_eq!(out.status.code(), Some(0), "{f}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn violated_relation_is_named() {
    let out = solab(&["frame", "check", "--spec", &data("violates_rels2.json")]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    let first: Value = serde_json::from_str(err.lines().next().unwrap()).unwrap();
    assert_eq!(first["failed"]["check"], "rels2");
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 1,").unwrap();
    assert_eq!(solab(&["frame", "check", "--spec", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, r#"{"n":1,"coefficients":{"L":[1]},"extra":0}"#).unwrap();
    assert_eq!(solab(&["frame", "check", "--spec", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(solab(&["heisenberg", "eval", "--n", "1", "--bogus", "2"]).status.code(), Some(2));
    assert_eq!(solab(&["heisenberg"]).status.code(), Some(2));
}

#[test]
fn tolerance_override_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_solab"))
        .args(["heisenberg", "verify", "--n", "1", "--phi-min", "0.1", "--phi-max", "10", "--samples", "20"])
        .env("SOLAB_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"failed\""));
}

#[test]
fn steady_length_agreement_record() {
    let out = solab(&[
        "steady", "length", "--k", "1", "--beta", "1", "--k1", "1", "--k2", "-1", "--t0", "-5", "--t1", "-0.01",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let closed = v["data"]["length"]["closed_form"].as_f64().unwrap();
    let quad = v["data"]["length"]["quadrature"].as_f64().unwrap();
    assert!((closed - quad).abs() < 1e-6);
}

#[test]
fn steady_eval_finds_the_boundary() {
    let out = solab(&["steady", "eval", "--k", "1", "--beta", "1", "--k1", "2", "--k2", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let tb = v["data"]["incompleteness"]["upper"]["t"].as_f64().unwrap();
    assert!((tb - 0.5f64.ln() / 2.0).abs() < 1e-12);
}
