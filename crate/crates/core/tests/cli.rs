use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn varexp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varexp")).current_dir(dir).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn norm_command() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "b.json", r#"{"window_start": 0, "values": [3.0, 4.0]}"#);
    let out = varexp(dir.path(), &["norm", "b.json", "-p", "2", "--out", "n.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("n.json")).unwrap()).unwrap();
    assert!((v["value"].as_f64().unwrap() - 5.0).abs() < 1e-10);

    write(dir.path(), "ones.json", r#"{"window_start": 0, "values": [1.0, 1.0]}"#);
    write(dir.path(), "p.json", r#"{"window_start": 0, "values": [1.0, 2.0], "tail": 2.0}"#);
    let out = varexp(dir.path(), &["norm", "ones.json", "-p", "p.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["value"].as_f64().unwrap() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-10);
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.json", "{\"window_start\": 0, \"values\": [1.0,");
    let out = varexp(dir.path(), &["norm", "bad.json", "-p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let out = varexp(dir.path(), &["verify", "lemma99"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("remark31") && err.contains("Usage"), "{err}");

    let out = varexp(dir.path(), &["norm", "missing.json", "-p", "2"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn hilbert_command() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "e0.json", r#"{"window_start": 0, "values": [1.0]}"#);
    let mut results = Vec::new();
    for method in ["direct", "fft"] {
        let out = varexp(dir.path(), &["hilbert", "e0.json", "--window", "-4:4", "--method", method]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["window_start"], -4);
        let vals: Vec<f64> = v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        let expect = [-0.25, -1.0 / 3.0, -0.5, -1.0, 0.0, 1.0, 0.5, 1.0 / 3.0, 0.25];
        for (x, y) in vals.iter().zip(expect) {
            assert!((x - y).abs() < 1e-12);
        }
        results.push(vals);
    }
    for (x, y) in results[0].iter().zip(&results[1]) {
        assert!((x - y).abs() < 1e-9);
    }

    write(dir.path(), "empty.json", r#"{"window_start": 0, "values": []}"#);
    let out = varexp(dir.path(), &["hilbert", "empty.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["values"].as_array().unwrap().iter().all(|x| x.as_f64() == Some(0.0)));
}

#[test]
fn verify_remark31_seed_7() {
    let dir = tempfile::tempdir().unwrap();
    let out = varexp(dir.path(), &["verify", "remark31", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["passed"], true);
    assert_eq!(report["seed"], 7);
    for c in report["checks"].as_array().unwrap() {
        if c["relation"] == "eq" {
            assert!(c["margin"].as_f64().unwrap().abs() <= 1e-12 * c["bound"].as_f64().unwrap().max(1.0));
        }
    }
}

#[test]
fn outputs_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    for (suite, format) in [("lemma23", "json"), ("theorem32", "csv"), ("theorem13", "json")] {
        let run = |name: &str| {
            let out = varexp(
                dir.path(),
                &["verify", suite, "--seed", "3", "--trials", "3", "--windows", "8,16", "--format", format, "--out", name],
            );
            assert!(matches!(out.status.code(), Some(0 | 1)));
            std::fs::read(dir.path().join(name)).unwrap()
        };
        assert_eq!(run("a"), run("b"), "{suite}");
    }
    write(dir.path(), "sweep.toml", "seed = 5\n[sweep]\nwindows = [8, 16]\n[sweep.estimate]\ntrials = 4\n");
    let a = varexp(dir.path(), &["--config", "sweep.toml", "sweep", "--format", "csv"]);
    let b = varexp(dir.path(), &["--config", "sweep.toml", "sweep", "--format", "csv"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).lines().count() > 4);
}

#[test]
fn failing_checks_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c.toml", "[suite]\nfamilies = [\"constant:3\"]\ntrials = 2\n");
    let out = varexp(dir.path(), &["--config", "c.toml", "verify", "theorem32"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn mikhlin_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = varexp(dir.path(), &["mikhlin", "--symbol", "sgn", "--bound", "1.000001"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
    let out = varexp(dir.path(), &["mikhlin", "--symbol", "one", "--bound", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn saturation_on_4096_window_within_budget() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let out = varexp(dir.path(), &["verify", "theorem13", "--windows", "2048", "--out", "r.json"]);
    let elapsed = start.elapsed();
    assert!(matches!(out.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(elapsed < Duration::from_secs(600), "{elapsed:?}");
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    let envelope: Vec<&Value> =
        report["checks"].as_array().unwrap().iter().filter(|c| c["name"].as_str().unwrap().contains("envelope")).collect();
    assert_eq!(envelope.len(), 3);
    assert!(envelope.iter().all(|c| c["observed"].as_f64().unwrap().is_finite() && c["passed"] == true));
}
