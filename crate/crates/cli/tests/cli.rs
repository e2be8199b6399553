use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nullary_core::chain::iota_prime;
use nullary_core::json;
use nullary_core::linalg::{int, parse_rational, Rational};
use nullary_core::point::Point;
use nullary_core::triangulation::triangulate_cube;
use nullary_core::zmap::ZMap;
use serde_json::Value;

const BOUNDARY: &str = "x1 \\/ x2 \\/ ~x1 \\/ ~x2 = 1";

fn nullary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nullary"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write_zmap(path: &Path, f: &ZMap) {
    json::write_value(path, &json::zmap_to_json(f)).unwrap();
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_prints_the_square_boundary() {
    let o = nullary(&["solve", "--problem", BOUNDARY, "--vars", "2"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let mut length = int(0);
    for part in v["parts"].as_array().unwrap() {
        let pts: Vec<Vec<Rational>> = part
            .as_array()
            .unwrap()
            .iter()
            .map(|p| p.as_array().unwrap().iter().map(|x| parse_rational(x.as_str().unwrap()).unwrap()).collect())
            .collect();
        assert_eq!(pts.len(), 2);
        // both ends on one side of the square
        let side = (0..2).any(|i| {
            pts[0][i] == pts[1][i] && (pts[0][i] == int(0) || pts[0][i] == int(1))
        });
        assert!(side, "{part}");
        for i in 0..2 {
            let (a, b) = (&pts[0][i], &pts[1][i]);
            length += if a > b { a - b } else { b - a };
        }
    }
    assert_eq!(length, int(4));
}

#[test]
fn solve_reads_problem_files_and_writes_out() {
    let dir = tempfile::tempdir().unwrap();
    let prob = dir.path().join("p.txt");
    fs::write(&prob, "x1 = ~x1\n").unwrap();
    let out = dir.path().join("poly.json");
    let o = nullary(&["solve", "--problem", s(&prob), "--vars", "1", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"1/2\""), "{text}");
}

#[test]
fn check_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    write_zmap(&good, &iota_prime());
    assert_eq!(code(&nullary(&["check", "--problem", BOUNDARY, "--unifier", s(&good)])), 0);

    let bad = dir.path().join("bad.json");
    let mid = ZMap::from_fn(triangulate_cube(1).unwrap(), |x| Point(vec![x.0[0].clone(), x.0[0].clone()])).unwrap();
    write_zmap(&bad, &mid);
    assert_eq!(code(&nullary(&["check", "--problem", BOUNDARY, "--unifier", s(&bad)])), 1);
}

#[test]
fn generalize_emits_a_strictly_larger_degree() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("iota.json");
    let out = dir.path().join("step.json");
    write_zmap(&input, &iota_prime());
    let o = nullary(&["generalize", "--unifier", s(&input), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json::read_value(&out).unwrap();
    let before = json::rational_from_json(&v["degree_in"]).unwrap();
    let after = json::rational_from_json(&v["degree_out"]).unwrap();
    assert_eq!(before, int(1));
    assert!(after > before);
    assert!(json::zmap_from_json(&v["theta"]).is_ok());
}

#[test]
fn chain_then_verify_then_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("chain");
    let o = nullary(&["chain", "--steps", "2", "--vars", "2", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["step_0.json", "step_1.json", "step_2.json", "report.json"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let report = json::read_value(&out.join("report.json")).unwrap();
    assert_eq!(report["degrees"], serde_json::json!(["1", "2", "3"]));

    let prob = dir.path().join("p.txt");
    fs::write(&prob, BOUNDARY).unwrap();
    assert_eq!(code(&nullary(&["verify", "--chain", s(&out), "--problem", s(&prob)])), 0);

    let step = out.join("step_1.json");
    let mut v = json::read_value(&step).unwrap();
    let zero = ZMap::constant(triangulate_cube(2).unwrap(), &Point::from_ints(&[0, 0])).unwrap();
    v["sigma"] = json::zmap_to_json(&zero);
    json::write_value(&step, &v).unwrap();
    let o = nullary(&["verify", "--chain", s(&out), "--problem", s(&prob)]);
    assert_eq!(code(&o), 1);
    let verdicts: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(verdicts["verdicts"]["composition"], Value::Bool(false));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(code(&nullary(&[])), 2);
    assert_eq!(code(&nullary(&["solve", "--vars", "2"])), 2);
    assert_eq!(code(&nullary(&["solve", "--problem", "x1 \\/ = 1", "--vars", "2"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{not json").unwrap();
    assert_eq!(code(&nullary(&["check", "--problem", BOUNDARY, "--unifier", s(&junk)])), 2);
    assert_eq!(code(&nullary(&["verify", "--chain", s(&dir.path().join("missing"))])), 2);
}

#[test]
fn chain_rejects_one_variable() {
    let dir = tempfile::tempdir().unwrap();
    let o = nullary(&["chain", "--steps", "1", "--vars", "1", "--out", s(&dir.path().join("c"))]);
    assert_eq!(code(&o), 2);
}
