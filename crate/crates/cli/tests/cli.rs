use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_debranges")).args(args).output().expect("spawn debranges")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn lattice_json(n: i64, offset: f64) -> String {
    let pts: Vec<String> = (-n..=n).map(|k| format!("{}", k as f64 + offset)).collect();
    format!(
        r#"{{"points": [{}], "tail": {{"type": "affine", "alpha_pos": 1.0, "alpha_neg": 1.0, "offset": {offset}}}}}"#,
        pts.join(",")
    )
}

#[test]
fn check_paley_wiener_model() {
    let o = run(&["check", "--model", "paley_wiener"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "check");
    assert_eq!(v["result"]["classification"]["overall"], "GeneralizedEntireOnly");
}

#[test]
fn check_density_mismatch_files() {
    let dir = TempDir::new().unwrap();
    let zeros: Vec<String> =
        (1..=300).flat_map(|k| [format!("{}", k as f64 - 0.5), format!("{}", -2.0 * k as f64 + 1.0)]).collect();
    let gamma: Vec<String> = std::iter::once("0".to_string())
        .chain((1..=300).flat_map(|k| [format!("{k}"), format!("{}", -2.0 * k as f64)]))
        .collect();
    let z = write(&dir, "z.csv", &zeros.join("\n"));
    let g = write(&dir, "g.csv", &gamma.join("\n"));
    let o = run(&["check", s(&z), s(&g)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["result"]["classification"]["overall"], "NotGeneralizedEntire");
    assert_eq!(v["result"]["classification"]["c2"]["status"], "violated");
}

#[test]
fn short_window_without_tail_is_inconclusive() {
    let dir = TempDir::new().unwrap();
    let z = write(&dir, "z.csv", &(0..=10).map(|k| format!("{}", k as f64 + 0.5)).collect::<Vec<_>>().join("\n"));
    let g = write(&dir, "g.csv", &(1..=10).map(|k| k.to_string()).collect::<Vec<_>>().join("\n"));
    let o = run(&["check", s(&z), s(&g)]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["result"]["classification"]["overall"], "Inconclusive");
}

#[test]
fn construct_from_lattice_files() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "s1.json", &lattice_json(200, 0.0));
    let b = write(&dir, "s2.json", &lattice_json(200, 0.5));
    let o = run(&["construct", s(&a), s(&b), "--grid", "9"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["result"]["hb"]["status"], "verified");
    assert_eq!(v["result"]["roundtrip"]["pass"], true);
    assert_eq!(v["result"]["samples"].as_array().unwrap().len(), 9 * 5);
}

#[test]
fn c0_violation_is_an_error() {
    let dir = TempDir::new().unwrap();
    let pts = |off: f64| (1..=50).map(|k| format!("{}", k as f64 + off)).collect::<Vec<_>>().join(",");
    let seq = |off: f64| {
        format!(
            r#"{{"points": [{}], "tail": {{"type": "affine", "alpha_pos": 1.0, "alpha_neg": null, "offset": {off}}}, "extent": "bounded_below"}}"#,
            pts(off)
        )
    };
    let a = write(&dir, "s1.json", &seq(0.0));
    let b = write(&dir, "s2.json", &seq(0.5));
    let o = run(&["construct", s(&a), s(&b)]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("C0 violated"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn bad_parameters_exit_three() {
    let o = run(&["construct", "--model", "lattice_pair", "--grid", "0"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("BadParameters"));

    let o = run(&["roots", "--model", "paley_wiener", "--beta", "4", "--interval", "-1", "1"]);
    assert_eq!(code(&o), 3);

    let o = run(&["check", "--model", "no_such_model"]);
    assert_eq!(code(&o), 3);

    let o = run(&["frobnicate"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn paley_wiener_roots_are_integers() {
    let o = run(&["roots", "--model", "paley_wiener", "--beta", "0", "--interval", "-3.5", "3.5"]);
    assert_eq!(code(&o), 0);
    let roots: Vec<f64> = json(&o)["result"]["roots"].as_array().unwrap().iter().map(|r| r.as_f64().unwrap()).collect();
    assert_eq!(roots, vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
}

#[test]
fn verify_hb_atan() {
    let o = run(&["verify-hb", "--model", "atan_family"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["hb"]["status"], "verified");
}

#[test]
fn parseval_kernel_norm() {
    let o = run(&["parseval", "--model", "paley_wiener", "--f", "kernel:0.5", "--g", "kernel:0.5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = &json(&o)["result"];
    let value = r["re"].as_f64().unwrap();
    let tail = r["tail_estimate"].as_f64().unwrap();
    assert!((value - 1.0).abs() <= 2.0 * tail, "{value} {tail}");
    assert!(r["im"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn phase_is_increasing() {
    let o = run(&["phase", "--model", "atan_family", "--samples", "51"]);
    assert_eq!(code(&o), 0);
    let rows = json(&o)["result"]["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 51);
    let phi: Vec<f64> = rows.iter().map(|r| r["phi"].as_f64().unwrap()).collect();
    assert!(phi.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn reports_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let o = run(&["check", "--model", "lattice_pair", "--param", "n=300", "--out", s(p)]);
        assert_eq!(code(&o), 0);
        assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "GeneralizedEntireOnly");
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let o = run(&["check", "--model", "lattice_pair", "--param", "n=300", "--timing"]);
    assert!(json(&o)["timing_ms"].is_number());
}

#[test]
fn efile_variants() {
    let dir = TempDir::new().unwrap();
    let e = write(&dir, "pw.json", r#"{"kind": "exp_linear", "a": 3.141592653589793}"#);
    let o = run(&["roots", "--efile", s(&e), "--interval", "-2.5", "2.5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["count"], 5);

    let two =
        format!(r#"{{"kind": "two_spectra", "seq1": {}, "seq2": {}}}"#, lattice_json(100, 0.0), lattice_json(100, 0.5));
    let e = write(&dir, "two.json", &two);
    let o = run(&["verify-hb", "--efile", s(&e), "--grid", "9"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["result"]["hb"]["status"], "verified");

    let o = run(&["verify-hb", "--efile", s(&e), "--model", "atan_family"]);
    assert_eq!(code(&o), 3);
}
