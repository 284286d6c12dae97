use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn nklab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nklab")).args(args).env_remove("NKLAB_SEED").output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn verify_structure_has_named_checks() {
    let o = nklab(&["verify", "structure", "--samples", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.len() >= 10);
    assert_eq!(v["pass"], true);
    for c in v["checks"].as_array().unwrap() {
        for k in ["name", "residual", "tolerance", "pass", "samples", "seed"] {
            assert!(c.get(k).is_some(), "{k}");
        }
    }
}

#[test]
fn verify_usage_errors() {
    assert_eq!(nklab(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(nklab(&["verify", "all", "--samples", "0"]).status.code(), Some(2));
    assert_eq!(nklab(&["verify", "all", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(nklab(&["verify", "all", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(nklab(&[]).status.code(), Some(2));
}

#[test]
fn verify_fails_under_impossible_tolerance() {
    let o = nklab(&["verify", "structure", "--samples", "5", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["pass"], false);
}

#[test]
fn seed_environment_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_nklab"))
        .args(["verify", "berger", "--samples", "2", "--seed", "1"])
        .env("NKLAB_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(json(&o)["seed"], 7);
    let bad = Command::new(env!("CARGO_BIN_EXE_nklab")).args(["verify", "berger"]).env("NKLAB_SEED", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn text_report_and_out_file() {
    let dir = std::env::temp_dir().join(format!("nklab-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    let o = nklab(&["verify", "examples", "--samples", "3", "--format", "text", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l.starts_with("PASS example1.lagrangian")));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn classify_fixtures() {
    let o = nklab(&["classify", "--input", &fixture("identity_pair.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["case"], "1");
    for k in ["two_theta1", "two_theta2", "two_theta3"] {
        assert!(v["params"][k].as_f64().unwrap().abs() < 1e-12);
    }

    let v = json(&nklab(&["classify", "--input", &fixture("example1_pair.json")]));
    assert_eq!(v["case"], "1");
    for k in ["two_theta1", "two_theta2", "two_theta3"] {
        assert!((v["params"][k].as_f64().unwrap() - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-9);
    }

    assert_eq!(nklab(&["classify", "--input", &fixture("malformed.json")]).status.code(), Some(2));
    assert_eq!(nklab(&["classify", "--input", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn angles_of_examples() {
    let pi = std::f64::consts::PI;
    for (name, want) in [("example2", [0.0, pi, pi]), ("example3", [pi, pi, 0.0])] {
        let o = nklab(&["angles", "--immersion", name, "--samples", "5"]);
        assert_eq!(o.status.code(), Some(0));
        let v = json(&o);
        assert!(v["spread"].as_f64().unwrap() <= 1e-7);
        for (a, w) in v["angles"][0].as_array().unwrap().iter().zip(want) {
            assert!((a.as_f64().unwrap() - w).abs() < 1e-8);
        }
    }
    let v = json(&nklab(&["angles", "--immersion", "phi2:example1", "--samples", "2"]));
    assert_eq!(v["immersion"], "phi2:example1");
}

#[test]
fn angles_of_files() {
    let o = nklab(&["angles", "--immersion", &fixture("rotated_immersion.json"), "--samples", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not Lagrangian"));
    assert_eq!(nklab(&["angles", "--immersion", &fixture("diagonal_immersion.json"), "--samples", "2"]).status.code(), Some(0));
    let v = json(&nklab(&["angles", "--immersion", &fixture("example2_immersion.json"), "--samples", "3"]));
    assert_eq!(v["canonical_label"], 2);
    assert_eq!(nklab(&["angles", "--immersion", "nothing-here"]).status.code(), Some(2));
}

#[test]
fn codazzi_scans() {
    let v = json(&nklab(&["codazzi-scan", "--case", "2"]));
    assert_eq!(v["points"].as_array().unwrap().len(), 50);
    assert!(v["min_norm"].as_f64().unwrap() > 0.4);
    let v = json(&nklab(&["codazzi-scan", "--case", "3"]));
    assert!((v["min_norm"].as_f64().unwrap() - 8.0 / (9.0 * 3f64.sqrt())).abs() < 1e-10);
    let o = nklab(&["codazzi-scan", "--case", "4", "--grid", "7"]);
    assert!(json(&o)["min_norm"].as_f64().unwrap() > 0.0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipped"));
    assert_eq!(nklab(&["codazzi-scan", "--case", "5"]).status.code(), Some(2));
}

#[test]
fn canonical_floats() {
    let o = nklab(&["codazzi-scan", "--case", "3"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("\"min_norm\": 5.1320023927966"));
    assert!(text.contains("e-1"));
}
