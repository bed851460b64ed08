use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn germlin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_germlin")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = germlin(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn fixtures(dir: &Path) {
    let out = germlin(&["fixtures", "--seed", "0", "--order", "6", "--output", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn reports_carry_version_and_inputs() {
    let r = report(&["bruno", "--theta", "3/7", "--cutoff", "5"]);
    assert_eq!(r["format_version"], 1);
    assert_eq!(r["verb"], "bruno");
    assert_eq!(r["inputs"]["theta"]["rational"], "3/7");
    assert_eq!(r["result"]["verdict"]["kind"], "RationalTheta");
    assert!(r["version"].is_string());
}

#[test]
fn jordan_oracle_reports_the_closed_form_count() {
    let r = report(&["centralizer", "--oracle", "jordan2", "--order", "6"]);
    assert_eq!(r["result"]["delta"], 5);
    // the exact null space is larger; the report says so
    assert_eq!(r["result"]["null_space_delta"], 10);
    assert_eq!(r["result"]["spans_agree"], false);
}

#[test]
fn resonant_fixture_is_an_obstruction_with_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let r = report(&["linearize", "--germ", &path(dir.path(), "resonant.json"), "--order", "4"]);
    assert_eq!(r["result"]["status"], "Obstructed");
    let o = &r["result"]["obstruction"];
    assert_eq!(o["exponents"], serde_json::json!([0, 2]));
    assert_eq!(o["coordinate"], 1);
    assert_eq!(o["value"]["re"], "1/1");
}

#[test]
fn exit_codes() {
    let missing = germlin(&["linearize", "--germ", "/definitely/not/here.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("not/here.json"));

    let unknown = germlin(&["transmogrify"]);
    assert_eq!(unknown.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"variables": 1, "order": 2, "coefficient_ring": "exact", "terms": [{"coordinate": 1, "exponents": [0], "value": "1"}]}"#).unwrap();
    let out = germlin(&["linearize", "--germ", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // singular linear part is a domain error
    let sing = dir.path().join("sing.json");
    fs::write(&sing, r#"{"matrix": [["0", "0"], ["0", "1"]]}"#).unwrap();
    let out = germlin(&["centralizer", "--matrix", sing.to_str().unwrap(), "--order", "3"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));

    assert_eq!(germlin(&["bruno", "--theta", "golden", "--cutoff", "5", "--bits", "20"]).status.code(), Some(2));
    assert_eq!(germlin(&["bruno", "--theta", "0.3", "--cutoff", "5"]).status.code(), Some(2));
}

#[test]
fn negative_verdicts_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let r = report(&["finite-order", "--germ", &path(dir.path(), "flip.json"), "--order", "4"]);
    assert_eq!(r["result"]["verdict"], "NotLinearizable");
    let r = report(&["finite-order", "--germ", &path(dir.path(), "finite_order.json"), "--order", "6"]);
    assert_eq!(r["result"]["verdict"], "LinearizableWitness");

    let fam = dir.path().join("fam.json");
    fs::write(
        &fam,
        r#"{"variables": 2, "order": 3, "coefficient_ring": "param-exact", "terms": [
            {"coordinate": 1, "exponents": [1, 0], "value": ["4"]},
            {"coordinate": 1, "exponents": [0, 2], "value": ["0", "1"]},
            {"coordinate": 2, "exponents": [0, 1], "value": ["2"]}]}"#,
    )
    .unwrap();
    let r = report(&["family", "--germ", fam.to_str().unwrap(), "--order", "3"]);
    assert_eq!(r["result"]["status"], "Obstructed");
    assert_eq!(r["result"]["coordinate"], 1);
}

#[test]
fn fixtures_are_deterministic_and_readable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    fixtures(a.path());
    fixtures(b.path());
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.iter().any(|n| n == "jordan2.json"));
    assert!(names.iter().any(|n| n == "elliptic.json"));
    for n in &names {
        assert_eq!(fs::read(a.path().join(n)).unwrap(), fs::read(b.path().join(n)).unwrap());
    }
    let jordan: Value = serde_json::from_slice(&fs::read(a.path().join("jordan2.json")).unwrap()).unwrap();
    assert_eq!(jordan["matrix"][0][1]["re"], "1/1");
    let r = report(&["linearize", "--germ", &path(a.path(), "conjugate_0.json")]);
    assert_eq!(r["result"]["status"], "Linearized");
    let expect: Value = serde_json::from_slice(&fs::read(a.path().join("conjugate_0_h.json")).unwrap()).unwrap();
    assert_eq!(r["result"]["h"], expect);
}

#[test]
fn numeric_verbs() {
    let dir = tempfile::tempdir().unwrap();
    fixtures(dir.path());
    let spec = path(dir.path(), "golden_spec.json");
    let r = report(&["omega", "--spec", &spec, "--order", "5"]);
    assert_eq!(r["result"]["table"].as_array().unwrap().len(), 4);
    let r = report(&["torsion-compare", "--spec", &spec, "--q", "3", "--order", "6"]);
    assert_eq!(r["result"]["certified"], true);

    let poly = dir.path().join("p.json");
    fs::write(&poly, r#"["0", "0", "0", "1"]"#).unwrap();
    let r = report(&["bernstein", "--poly", poly.to_str().unwrap(), "--set", "disk:0,1", "--samples", "50", "--bits", "96"]);
    assert_eq!(r["result"]["passed"], true);
    assert_eq!(r["inputs"]["samples"], 50);

    let cert = dir.path().join("cert.json");
    fs::write(
        &cert,
        r#"{"c_set": {"kind": "disk", "center": "0", "radius": "1"},
            "k_set": {"kind": "disk", "center": "0", "radius": "2"},
            "d": 1, "rho1": "2", "norms": [{"degree": 1, "norm": "1"}]}"#,
    )
    .unwrap();
    let r = report(&["radius-bound", "--cert", cert.to_str().unwrap(), "--at", "1+1i"]);
    assert!(r["result"]["radius"].as_str().unwrap().starts_with("2.5"));
    let out = germlin(&["radius-bound", "--cert", cert.to_str().unwrap(), "--at", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = germlin(&["bruno", "--theta", "1/3", "--cutoff", "3", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_slice(&fs::read(out).unwrap()).unwrap();
    assert_eq!(v["verb"], "bruno");
}
