use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn curvelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvelab"))
        .args(args)
        .env("CURVELAB_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_curvelab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "status {:?}, stderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

fn matrix(v: &Value) -> Vec<Vec<f64>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|row| row.as_array().unwrap().iter().map(f).collect())
        .collect()
}

#[test]
fn identity_has_constant_scalar_curvature() {
    let d = report(&curvelab(&["decompose", "--fixture", "identity", "--n", "4"]));
    assert!((f(&d["scal"]) - 12.0).abs() <= 1e-12);
    assert!(f(&d["parts"]["L_norm"]) <= 1e-12);
    assert!(f(&d["parts"]["W_norm"]) <= 1e-12);
    assert_eq!(d["basis"], "lex-pairs");
}

#[test]
fn hodge_star_is_pure_wedge4() {
    let d = report(&curvelab(&["decompose", "--fixture", "hodge-star", "--n", "4"]));
    let parts = &d["parts"];
    for key in ["U_norm", "L_norm", "W_norm"] {
        assert!(f(&parts[key]) <= 1e-12, "{key}");
    }
    assert!((f(&parts["W4_norm"]) - 6f64.sqrt()).abs() <= 1e-12);
}

#[test]
fn malformed_input_is_an_input_error() {
    let out = with_stdin(
        &["decompose", "-"],
        r#"{"n": 4, "basis": "lex-pairs", "matrix": [[1]], "convention": "sec(X∧Y)=R(X∧Y,X∧Y)"}"#,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/matrix"));

    let out = with_stdin(&["decompose", "-"], "not json");
    assert_eq!(out.status.code(), Some(2));

    let out = curvelab(&["decompose", "--fixture", "flat-torus", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));

    let out = curvelab(&[
        "kterm",
        "--rep",
        "tensor",
        "--p",
        "2",
        "--fixture",
        "identity",
        "--n",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn documents_round_trip_through_stdin() {
    let cert = report(&curvelab(&["certify", "--k", "0", "--fixture", "RW", "--n", "4"]));
    let doc = serde_json::to_string(&cert["operator"]).unwrap();
    let from_file = report(&with_stdin(&["decompose", "-"], &doc));
    let from_fixture = report(&curvelab(&["decompose", "--fixture", "RW", "--n", "4"]));
    assert_eq!(from_file["parts"], from_fixture["parts"]);
    assert!(from_file["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn asymmetric_input_is_symmetrized_with_a_warning() {
    let mut m = vec![vec![0.0; 6]; 6];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m[0][1] = 0.01;
    let doc = serde_json::json!({
        "n": 4,
        "basis": "lex-pairs",
        "matrix": m,
        "convention": "sec(X∧Y)=R(X∧Y,X∧Y)",
    });
    let d = report(&with_stdin(&["decompose", "-"], &doc.to_string()));
    assert_eq!(d["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn first_exterior_power_gives_ricci() {
    let k = report(&curvelab(&[
        "kterm",
        "--rep",
        "wedge",
        "--p",
        "1",
        "--fixture",
        "RL",
        "--n",
        "5",
    ]));
    let d = report(&curvelab(&["decompose", "--fixture", "RL", "--n", "5"]));
    let (km, ric) = (matrix(&k["matrix"]), matrix(&d["ric"]));
    for (a, b) in km.iter().flatten().zip(ric.iter().flatten()) {
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn hodge_star_is_invisible_on_traceless_quadratics() {
    let k = report(&curvelab(&[
        "kterm",
        "--rep",
        "sym0",
        "--p",
        "2",
        "--fixture",
        "hodge-star",
        "--n",
        "4",
    ]));
    assert_eq!(k["dim"], 9);
    assert!(matrix(&k["matrix"]).iter().flatten().all(|x| x.abs() <= 1e-12));
}

#[test]
fn full_symmetric_powers_report_harmonic_blocks() {
    let k = report(&curvelab(&[
        "kterm",
        "--rep",
        "sym",
        "--p",
        "3",
        "--fixture",
        "RW",
        "--n",
        "4",
    ]));
    let dims: Vec<u64> = k["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["dim"].as_u64().unwrap())
        .collect();
    assert_eq!(dims.iter().sum::<u64>(), k["dim"].as_u64().unwrap());
    assert_eq!(dims, vec![16, 4]);
}

#[test]
fn with_basis_prints_the_harmonic_columns() {
    let k = report(&curvelab(&[
        "kterm",
        "--rep",
        "sym0",
        "--p",
        "2",
        "--with-basis",
        "--fixture",
        "identity",
        "--n",
        "3",
    ]));
    let cols = matrix(&k["basis"]["columns"]);
    assert_eq!(cols.len(), 5);
    assert!(cols.iter().all(|c| c.len() == 6));
}

#[test]
fn verification_suites_pass() {
    let d = report(&curvelab(&["verify", "--suite", "thmB", "--n", "4", "--pmax", "4"]));
    assert_eq!(d["pass"], true);
    assert!(f(&d["worst"]) <= 1e-8);

    let d = report(&curvelab(&["verify", "--suite", "lemmas", "--pmax", "6"]));
    assert_eq!(d["pass"], true);
    for row in d["rows"].as_array().unwrap() {
        assert_eq!(row["sym"]["wedge4"], 0);
        assert_eq!(row["wedge"]["wedge4"], 1);
    }

    let d = report(&curvelab(&["verify", "--suite", "gpowers"]));
    assert_eq!(d["pass"], true);

    let d = report(&curvelab(&[
        "verify", "--suite", "integral", "--n", "4", "--pmax", "3", "--trials", "4",
    ]));
    assert_eq!(d["pass"], true);
}

#[test]
fn certify_verdicts() {
    let d = report(&curvelab(&["certify", "--k", "1", "--fixture", "identity", "--n", "4"]));
    assert_eq!(d["verdict"], "certified");

    let d = report(&curvelab(&["certify", "--k", "0", "--fixture", "s2xs2", "--n", "4"]));
    assert_eq!(d["verdict"], "certified");

    let d = report(&curvelab(&["certify", "--k", "0.01", "--fixture", "s2xs2", "--n", "4"]));
    assert_eq!(d["verdict"], "refuted");
    assert!(f(&d["plane"]["sec"]) < 0.01);

    let d = report(&curvelab(&[
        "certify",
        "--k",
        "1",
        "--upper",
        "--fixture",
        "identity",
        "--n",
        "4",
    ]));
    assert_eq!(d["verdict"], "certified");

    let d = report(&curvelab(&[
        "certify",
        "--k",
        "0",
        "--fixture",
        "identity",
        "--n",
        "5",
        "--pmax",
        "3",
    ]));
    assert_ne!(d["verdict"], "certified");
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = curvelab(&[
        "-o",
        path.to_str().unwrap(),
        "decompose",
        "--fixture",
        "identity",
        "--n",
        "3",
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let d: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(d["degraded"], true);
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 1);
}

#[test]
fn bad_thread_count_is_an_input_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_curvelab"))
        .args(["decompose", "--fixture", "identity", "--n", "4"])
        .env("CURVELAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
