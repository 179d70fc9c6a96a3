use std::path::Path;
use std::process::{Command, Output};

use qcalc::json::{mpoly_from_json, wave_from_json};
use qcalc::qwave::{direct_binomial, Sign};
use qcalc::{CoefExpr, MPoly, Speed};
use serde_json::Value;

fn qcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn verify_exit_codes() {
    let out = qcalc(&[
        "verify",
        "--identity",
        "q-hermite-binomial",
        "--n-max",
        "10",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v[0]["id"], "q-hermite-binomial");
    assert_eq!(v[0]["status"], "verified");

    let out = qcalc(&["verify", "--identity", "all", "--n-max", "8"]);
    assert_eq!(code(&out), 0);
    let ids: Vec<String> = json(&out)
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["id"].as_str().unwrap().to_string())
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert_eq!(ids.len(), 8);

    assert_eq!(code(&qcalc(&["verify", "--identity", "bogus"])), 2);
    assert_eq!(code(&qcalc(&["verify"])), 2);
}

#[test]
fn verify_with_seed_is_deterministic() {
    let a = qcalc(&[
        "verify",
        "--identity",
        "exp-product",
        "--order",
        "10",
        "--seed",
        "42",
    ]);
    let b = qcalc(&[
        "verify",
        "--identity",
        "exp-product",
        "--order",
        "10",
        "--seed",
        "42",
    ]);
    assert_eq!(code(&a), 0);
    assert_eq!(json(&a)[0]["range"], json(&b)[0]["range"]);
}

#[test]
fn solve_quadratic_at_rest() {
    let out = qcalc(&["solve", "--f", "0,0,1", "--g", "0", "--c", "1"]);
    assert_eq!(code(&out), 0);
    let u = wave_from_json(&json(&out)).unwrap();
    let mut expected = MPoly::zero(&["x", "t"]);
    expected.add_term(vec![2, 0], CoefExpr::one());
    expected.add_term(vec![0, 2], CoefExpr::q());
    assert_eq!(u.body, expected);
}

#[test]
fn solve_quadratic_moving() {
    let out = qcalc(&[
        "solve",
        "--f",
        "0,0,1",
        "--g-named",
        "neg-2q-cx",
        "--c",
        "1",
        "--check",
    ]);
    assert_eq!(code(&out), 0);
    let u = wave_from_json(&json(&out)).unwrap();
    let speed = Speed::Value(CoefExpr::one());
    assert_eq!(u.body, direct_binomial(2, Sign::Minus, &speed).body);

    let out = qcalc(&[
        "solve",
        "--f",
        "0,0,1",
        "--g-named",
        "neg-2q-cx",
        "--c",
        "c",
    ]);
    let u = wave_from_json(&json(&out)).unwrap();
    assert_eq!(
        u.body,
        direct_binomial(2, Sign::Minus, &Speed::Symbolic).body
    );
}

#[test]
fn solve_rejects_bad_input() {
    assert_eq!(
        code(&qcalc(&["solve", "--f", "0,0,1", "--g", "0", "--c", "0"])),
        2
    );
    assert_eq!(
        code(&qcalc(&["solve", "--f", "0,1/0", "--g", "0", "--c", "1"])),
        2
    );
    assert_eq!(
        code(&qcalc(&["solve", "--f", "0,a", "--g", "0", "--c", "1"])),
        2
    );
    assert_eq!(
        code(&qcalc(&[
            "solve",
            "--f-named",
            "tan_q",
            "--g",
            "0",
            "--c",
            "1"
        ])),
        2
    );
    assert_eq!(code(&qcalc(&["solve", "--g", "0", "--c", "1"])), 2);
}

#[test]
fn solve_named_series() {
    let out = qcalc(&[
        "solve",
        "--f-named",
        "cos_q",
        "--g-named",
        "sin_q",
        "--c",
        "-3/2",
        "--order",
        "8",
        "--check",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["order"], 8);
    assert!(wave_from_json(&v).is_ok());
}

#[test]
fn hermite_two() {
    let out = qcalc(&["hermite", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let h = mpoly_from_json(&json(&out)).unwrap();
    let two = CoefExpr::from(qcalc::qnum::q_int(2));
    let mut expected = MPoly::zero(&["x"]);
    expected.add_term(vec![2], &two * &two);
    expected.add_term(vec![0], -two);
    assert_eq!(h, expected);

    let out = qcalc(&["hermite", "--n", "3", "--kind", "classical"]);
    let h = mpoly_from_json(&json(&out)).unwrap();
    assert_eq!(h, qcalc::hermite::hermite_classical(3));
    assert_eq!(code(&qcalc(&["hermite", "--n", "2", "--kind", "p"])), 2);
}

#[test]
fn expand_round_trips() {
    let out = qcalc(&["expand", "--binomial", "x-ct", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let p = mpoly_from_json(&json(&out)).unwrap();
    // x² − [2] c x t + q c² t²
    let mut expected = MPoly::zero(&["x", "t", "c"]);
    expected.add_term(vec![2, 0, 0], CoefExpr::one());
    expected.add_term(vec![1, 1, 1], -CoefExpr::from(qcalc::qnum::q_int(2)));
    expected.add_term(vec![0, 2, 2], CoefExpr::q());
    assert_eq!(p, expected);
    assert_eq!(
        code(&qcalc(&["expand", "--binomial", "x*ct", "--n", "2"])),
        2
    );
}

fn write_solution(dir: &Path) -> std::path::PathBuf {
    let out = qcalc(&[
        "solve",
        "--f",
        "0,0,1",
        "--g-named",
        "neg-2q-cx",
        "--c",
        "1",
    ]);
    let path = dir.join("u.json");
    std::fs::write(&path, &out.stdout).unwrap();
    path
}

#[test]
fn sample_csv_contract() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_solution(dir.path());
    let csv = dir.path().join("u.csv");
    let out = qcalc(&[
        "sample",
        "--input",
        input.to_str().unwrap(),
        "--q",
        "0.5",
        "--c",
        "1",
        "--x",
        " -2:2:0.1",
        "--t",
        "0:1:0.5",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,t,u,valid");
    assert_eq!(lines.len(), 1 + 41 * 3);
    let mut prev = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for line in &lines[1..] {
        let f: Vec<&str> = line.split(',').collect();
        let (x, t, u): (f64, f64, f64) = (
            f[0].parse().unwrap(),
            f[1].parse().unwrap(),
            f[2].parse().unwrap(),
        );
        assert!((x, t) > prev, "rows are x-major");
        prev = (x, t);
        // (x − t)(x − q t) at q = 1/2
        assert!((u - (x - t) * (x - 0.5 * t)).abs() < 1e-12);
        assert_eq!(f[3], "true");
    }
    // rerun to stdout gives the same bytes
    let again = qcalc(&[
        "sample",
        "--input",
        input.to_str().unwrap(),
        "--q",
        "1/2",
        "--c",
        "1",
        "--x",
        "-2:2:0.1",
        "--t",
        "0:1:0.5",
    ]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), text);
}

#[test]
fn sample_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_solution(dir.path());
    let path = input.to_str().unwrap();
    let grid = ["--x", "0:1:0.5", "--t", "0:1:0.5"];
    let run = |extra: &[&str]| code(&qcalc(&[&["sample"], extra, &grid].concat()));
    assert_eq!(run(&["--input", path, "--q", "0", "--c", "1"]), 2);
    assert_eq!(run(&["--input", path, "--q", "-1", "--c", "1"]), 2);
    assert_eq!(run(&["--input", path, "--q", "2", "--c", "3"]), 2);
    assert_eq!(
        run(&["--input", "/nonexistent/u.json", "--q", "2", "--c", "1"]),
        2
    );
    let garbage = dir.path().join("bad.json");
    std::fs::write(&garbage, "{\"vars\": 1}").unwrap();
    assert_eq!(
        run(&["--input", garbage.to_str().unwrap(), "--q", "2", "--c", "1"]),
        2
    );
}
