use std::path::Path;
use std::process::{Command, Output};

use circle_distortion::diffeo::Mobius;
use circle_distortion::DiffeoMap;
use serde_json::Value;

fn distortion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distortion"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn distort_is_deterministic_and_self_describing() {
    let args = ["distort", "--example", "mobius", "--n-max", "16"];
    let a = distortion(&args);
    let b = distortion(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    assert_eq!(v["schema"], "circle-distortion/distortion-report/v1");
    assert_eq!(v["config"]["n_max"], 16);
    assert_eq!(v["config"]["metric_resolved"], "c1-circle");
    let limit = v["result"]["limit_estimate"].as_f64().unwrap();
    assert!((limit - 2f64.ln()).abs() < 1e-9);
}

#[test]
fn map_json_matches_example_hash() {
    let g = DiffeoMap::mobius(Mobius::new(1.0, 0.0, 0.0, 2.0).unwrap());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, g.to_json()).unwrap();
    let from_file = distortion(&["classify", "--map-json", &format!("@{}", path.display())]);
    let inline = distortion(&["classify", "--map-json", &g.to_json()]);
    let example = distortion(&["classify", "--example", "mobius"]);
    for out in [&from_file, &inline, &example] {
        assert_eq!(out.status.code(), Some(0));
        let v = json_of(out);
        assert_eq!(v["descriptor_hash"], g.descriptor_hash());
        assert_eq!(v["result"]["verdict"], "Undistorted");
    }
}

#[test]
fn certify_writes_certificate_and_figure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let run = distortion(&["certify", "--K", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema"], "circle-distortion/theorem3-certificate/v1");
    assert_eq!(v["result"]["accepted"], true);
    assert_eq!(v["result"]["certificate"]["m"], 512);
    let csv = std::fs::read_to_string(dir.path().join("cert.figure.csv")).unwrap();
    assert!(csv.lines().any(|l| l == "x,f2"));
    let svg = std::fs::read_to_string(dir.path().join("cert.figure.svg")).unwrap();
    assert!(svg.contains("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn small_k_certifies_close_to_identity() {
    let run = distortion(&["certify", "--K", "0.1"]);
    assert_eq!(run.status.code(), Some(0));
    let v = json_of(&run);
    assert!(v["result"]["d1ac_to_identity"].as_f64().unwrap() < 0.2);
}

#[test]
fn exit_codes() {
    let bad_k = distortion(&["certify", "--K", "3"]);
    assert_eq!(bad_k.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad_k.stderr).contains("--K"));
    assert_eq!(distortion(&["distort", "--example", "prop2", "--unknown"]).status.code(), Some(1));
    assert_eq!(distortion(&["distort"]).status.code(), Some(1));
    assert_eq!(distortion(&["classify", "--example", "prop2", "--format", "svg"]).status.code(), Some(1));
    assert_eq!(distortion(&["distort", "--example", "prop2", "--n-max", "1000000"]).status.code(), Some(2));
    // m = 4 fails the gating conditions
    assert_eq!(distortion(&["certify", "--K", "2", "--m", "4"]).status.code(), Some(3));
}

#[test]
fn sweep_and_fragment_csv() {
    let sweep = distortion(&["sweep", "--example", "mobius", "--grid", "5", "--theta", "0.02", "--format", "csv"]);
    assert_eq!(sweep.status.code(), Some(0));
    let text = String::from_utf8(sweep.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "theta,rotation,rational");
    assert_eq!(rows.len(), 6);
    // hyperbolic fixed points lock the rotation number at 0 for small θ
    assert!(rows[1..].iter().all(|r| r.ends_with(",0/1")));

    let frag = distortion(&["fragment", "--example", "mobius", "--metric", "c1-circle", "--epsilon", "0.2", "--format", "csv"]);
    assert_eq!(frag.status.code(), Some(0));
    let text = String::from_utf8(frag.stdout).unwrap();
    assert!(text.contains("# N=6 "));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 7);
}

#[test]
fn svg_output_for_distort() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.svg");
    let run = distortion(&["distort", "--example", "rotation", "--theta", "0.3", "--n-max", "8", "--format", "svg", "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    assert!(Path::new(&out).exists());
    let svg = std::fs::read_to_string(out).unwrap();
    assert!(svg.starts_with("<!-- config=") && svg.contains("<svg"));
}
