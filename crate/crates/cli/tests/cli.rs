use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finslerkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn funk_distance_from_center() {
    let disc = data("disc.body");
    let out = run(&[
        "dist", "--body", &disc, "--metric", "funk", "--from", "0,0", "--to", "0.5,0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out)["value"].as_f64().unwrap();
    assert!((v - 2f64.ln()).abs() < 1e-12);

    let out = run(&[
        "dist", "--body", &disc, "--metric", "funk", "--from", "0,0", "--to", "0,0",
    ]);
    assert_eq!(json(&out)["value"].as_f64(), Some(0.0));
}

#[test]
fn negative_coordinates_and_reverse_metric() {
    let square = data("square.body");
    let out = run(&[
        "dist",
        "--body",
        &square,
        "--metric",
        "reverse-funk",
        "--from",
        "-0.5,0",
        "--to",
        "0,0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    // F(0, -0.5) exits the square at -1.
    let v = json(&out)["value"].as_f64().unwrap();
    assert!((v - 2f64.ln()).abs() < 1e-12);
}

#[test]
fn example_one_report() {
    let out = run(&["example", "--name", "ex1", "--y1", "0.5", "--y2", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let expected = r["expected"]["d_m"]["value"].as_f64().unwrap();
    assert!((expected - (1.0 + 2f64.ln())).abs() < 1e-12);
    assert_eq!(r["expected"]["d_m"]["provenance"], "closed_form");
    assert_eq!(r["passed"], true);
    assert_eq!(r["runtime"].as_f64(), Some(0.0));
}

#[test]
fn failed_assertion_exits_one() {
    let out = run(&["example", "--name", "ex2", "--margin", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn input_errors_exit_two() {
    let disc = data("disc.body");
    let cases: Vec<Vec<&str>> = vec![
        vec!["frobnicate"],
        vec![
            "dist", "--body", &disc, "--metric", "funk", "--from", "0,0", "--to", "0.5,0", "--t", "1.5",
        ],
        vec![
            "dist", "--body", &disc, "--metric", "funk", "--from", "0,0,0", "--to", "0.5,0",
        ],
        vec![
            "dist", "--body", &disc, "--metric", "funk", "--from", "0,0", "--to", "2,0",
        ],
        vec![
            "dist",
            "--body",
            "/nonexistent.body",
            "--metric",
            "funk",
            "--from",
            "0,0",
            "--to",
            "0,0",
        ],
        vec!["geodesic", "--lagrangian", "funk", "--from", "0,0", "--to", "0.5,0"],
        vec!["example", "--name", "ex1", "--y1", "1.5"],
    ];
    let broken = data("broken.body");
    let mut cases = cases;
    cases.push(vec![
        "dist", "--body", &broken, "--metric", "funk", "--from", "0,0", "--to", "0,0",
    ]);
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(!err.trim().is_empty(), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["example", "--name", "sum", "--t", "0.25", "--count", "3", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn geodesic_path_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("path.csv");
    let out = run(&[
        "geodesic",
        "--lagrangian",
        "hyperbolic",
        "--from",
        "-1,1",
        "--to",
        "1,1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let length = json(&out)["length"].as_f64().unwrap();
    assert!((length - 3f64.acosh()).abs() < 1e-3);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x0,x1"));
    assert_eq!(lines.next(), Some("-1,1"));
    assert_eq!(text.lines().last(), Some("1,1"));
}

#[test]
fn geodesic_json_on_body() {
    let disc = data("disc.body");
    let out = run(&[
        "geodesic",
        "--body",
        &disc,
        "--lagrangian",
        "hilbert",
        "--from",
        "0,0",
        "--to",
        "0.5,0",
        "--multistart",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!((r["length"].as_f64().unwrap() - 0.5 * 3f64.ln()).abs() < 1e-6);
    assert!(r["nodes"].as_array().unwrap().len() >= 33);
}

#[test]
fn sphere_samples() {
    let disc = data("disc.body");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sphere.csv");
    let out = run(&[
        "dist",
        "--body",
        &disc,
        "--metric",
        "hilbert",
        "--from",
        "0,0",
        "--sphere",
        "0.5",
        "--samples",
        "8",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let rows: Vec<Vec<f64>> = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 8);
    // Hilbert sphere of radius 1/2 around the center is the circle of radius tanh(1/2).
    for row in rows {
        let r = (row[0] * row[0] + row[1] * row[1]).sqrt();
        assert!((r - 0.5f64.tanh()).abs() < 1e-9, "{r}");
    }
}

#[test]
fn probes() {
    let square = data("square.body");
    let out = run(&[
        "probe", "--body", &square, "--metric", "funk", "--kind", "triangle", "--count", "200",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
    let half = data("halfplane.body");
    let out = run(&[
        "probe", "--body", &half, "--metric", "hilbert", "--kind", "busemann", "--count", "200",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["details"]["forward_tail"].as_f64().unwrap() <= 1e-3);
}

#[test]
fn triangle_witness_and_evaluation() {
    let out = run(&["triangle", "--t", "0", "--count", "2000", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let w = json(&out);
    assert!(w["witness"]["gap"].as_f64().unwrap() > 0.01);
    for key in ["t", "kind", "X", "Y", "forward", "backward", "gap"] {
        assert!(w["witness"].get(key).is_some(), "{key}");
    }

    let out = run(&["triangle", "--t", "0.5", "--count", "2000"]);
    assert_eq!(json(&out)["witness"], Value::Null);

    let out = run(&["triangle", "--t", "0", "--x", "1,1,1", "--y", "2,2,2"]);
    assert_eq!(json(&out)["forward"].as_f64(), Some(0.0));
}

#[test]
fn report_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("summary.csv");
    let out = run(&["report", "--multistart", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,residual,tolerance,passed,runtime"));
    let names: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(names.contains(&"example_1") && names.contains(&"weight_counterexample"));
}
