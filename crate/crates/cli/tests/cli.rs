use std::path::PathBuf;
use std::process::{Command, Output};

use ehrhart_core::count::TranslationFamily;
use ehrhart_core::json::{family_to_json, to_pretty};
use ehrhart_core::qde::{build_trapezoid, TrapezoidKind};
use ehrhart_core::rational::rat;
use ehrhart_core::Point;
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehrhart-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(args: &[&str]) -> i32 {
    let out = run(args);
    let c = out.status.code().expect("exit code");
    if c != 0 {
        // nothing machine-readable on failure
        assert!(serde_json::from_slice::<Value>(&out.stdout).is_err());
    }
    c
}

#[test]
fn build_qde_vertex_counts() {
    let v = ok_json(&["build-qde", "--alpha", "1", "--beta", "3", "--gamma", "2", "--mode", "rational"]);
    assert_eq!(v["vertexCount"], 60);
    let v = ok_json(&["build-qde", "--alpha", "1", "--beta", "2", "--gamma", "1", "--mode", "real"]);
    assert_eq!(v["vertexCount"], 64);
    assert_eq!(code(&["build-qde", "--alpha", "3", "--beta", "2", "--gamma", "1"]), 2);
}

#[test]
fn build_qde_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let v = ok_json(&[
        "build-qde", "--alpha", "2", "--beta", "3", "--gamma", "2", "-o", out.to_str().unwrap(),
    ]);
    assert_eq!(v["N"], "6");
    assert_eq!(v["L"], "1441");
    let min = ok_json(&["scan", "-f", out.to_str().unwrap(), "--from", "0", "--to", "6", "--min-only"]);
    assert_eq!(min["min"], 1442);
}

#[test]
fn count_examples() {
    assert_eq!(ok_json(&["count", "-p", &fixture("unit-cube.json")])["count"], "8");
    assert_eq!(
        ok_json(&["count", "-p", &fixture("delta-k2.json"), "--translate-vec", "1/2,0,0"])["count"],
        "3"
    );
    assert_eq!(ok_json(&["count", "-p", &fixture("unit-square.json"), "--dilate", "3"])["count"], "16");
    assert_eq!(ok_json(&["count", "-p", &fixture("unit-square.json"), "--translate", "0.5"])["count"], "2");
}

#[test]
fn malformed_polytope_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dim\": 2, \"vertices\": [[\"1/0\", \"0\"]]}").unwrap();
    assert_eq!(code(&["count", "-p", bad.to_str().unwrap()]), 2);
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(code(&["count", "-p", bad.to_str().unwrap()]), 2);
}

#[test]
fn resource_guard_exits_4() {
    let out = Command::new(env!("CARGO_BIN_EXE_ehrhart-forge"))
        .args(["count", "-p", &fixture("unit-cube.json"), "--dilate", "1000"])
        .env("EHRHART_FORGE_CELL_GUARD", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn scan_trapezoid_family() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    let eps = rat(1, 64);
    let p = build_trapezoid(TrapezoidKind::A { p: 2, q: 1 }, 4, Some(&eps)).unwrap();
    let f = TranslationFamily::new(p, Point::from_ints(&[1, 0]), 4).unwrap();
    std::fs::write(&path, to_pretty(&family_to_json(&f))).unwrap();
    let v = ok_json(&["scan", "-f", path.to_str().unwrap(), "--from", "0", "--to", "4"]);
    let counts: Vec<u64> = v["entries"].as_array().unwrap().iter().map(|e| e[1].as_u64().unwrap()).collect();
    assert_eq!(counts, vec![2, 3, 4, 5]);
    assert_eq!(code(&["scan", "-f", path.to_str().unwrap(), "--from", "3", "--to", "1"]), 2);
}

#[test]
fn oracle_examples() {
    let v = ok_json(&["oracle", "--alpha", "1", "--beta", "3", "--gamma", "2"]);
    assert_eq!(v["feasible"], true);
    let v = ok_json(&["oracle", "--alpha", "2", "--beta", "3", "--gamma", "2"]);
    assert_eq!(v["min"], "1");
    let v = ok_json(&["oracle", "--alpha", "0", "--beta", "2", "--gamma", "1"]);
    assert_eq!(v["feasible"], true);
}

#[test]
fn convert_examples() {
    let v = ok_json(&["convert", "-f", &fixture("segment-family.json")]);
    assert!(v["M"].as_str().unwrap().parse::<u64>().unwrap() >= 2);
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    ok_json(&["build-qde", "--alpha", "1", "--beta", "2", "--gamma", "1", "-o", g.to_str().unwrap()]);
    let v = ok_json(&["convert", "-f", g.to_str().unwrap()]);
    assert_eq!(v["validN"], "2");

    let f = dir.path().join("empty.json");
    std::fs::write(
        &f,
        r#"{"polytope": {"dim": 1, "vertices": [["1/3"], ["2/3"]]}, "direction": ["1"], "denominator": "3"}"#,
    )
    .unwrap();
    assert_eq!(code(&["convert", "-f", f.to_str().unwrap()]), 2);
}

#[test]
fn realize_examples() {
    let v = ok_json(&["realize", "--sequence", "0"]);
    assert!(v["K"].as_str().is_some());
    let v = ok_json(&["realize", "--qp", &fixture("floor-t-over-2.json"), "--period", "4"]);
    assert_eq!(v["validN"], "4");
}

#[test]
fn ketp_examples() {
    assert_eq!(ok_json(&["ketp", "-p", &fixture("unit-square.json"), "-k", "5"])["g"], 1);
    assert_eq!(ok_json(&["ketp", "-p", &fixture("unit-square.json"), "-k", "1"])["g"], Value::Null);
    assert_eq!(ok_json(&["ketp", "-p", &fixture("unit-cube.json"), "-k", "28", "--integer"])["g"], 2);
    assert_eq!(code(&["ketp", "-p", &fixture("segment-third.json"), "-k", "1"]), 2);
    assert_eq!(
        ok_json(&["ketp", "-p", &fixture("segment-third.json"), "-k", "1", "--bound", "10"])["g"],
        1
    );
}

#[test]
fn verify_identity_suite() {
    let v = ok_json(&["verify", "--suite", "identity"]);
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_negative_control() {
    assert_eq!(code(&["verify", "--suite", "all", "--fixture", &fixture("corrupted-fixture.json")]), 3);
    assert_eq!(code(&["verify", "--suite", "nonsense"]), 2);
}
