use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const SYS31: &str = r#"{
  "lambda": "1/2",
  "n": 4,
  "a": [],
  "b": [[0, 1, "2"], [0, 4, "25"], [1, 2, "15/2"], [1, 3, "40"], [2, 1, "-20"], [2, 2, "-245/8"]]
}"#;

fn abelian(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abelian")).args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> (String, Value) {
    let out = abelian(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}\n{text}"));
    (text, v)
}

fn code(args: &[&str]) -> i32 {
    abelian(args).status.code().expect("exit code")
}

fn fixture(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn sys31() -> (TempDir, String) {
    let dir = TempDir::new().unwrap();
    let p = fixture(dir.path(), "sys31.json", SYS31);
    (dir, p.to_str().unwrap().to_string())
}

#[test]
fn reduce_second_row_entry() {
    let (_, v) = ok_json(&["reduce", "--lambda", "1/2", "--i", "2", "--j", "1"]);
    // −I(0,2)/(2λ) = −2π·λ^{3/2}(1−λ)^{−3/2}·h² = −2πh² at λ = 1/2
    let c = v["coefficients"].as_array().unwrap();
    assert_eq!(c.len(), 3);
    assert_eq!(c[2], "0 + -4*s [pi^1]");
}

#[test]
fn reduce_edge_cases() {
    let (_, v) = ok_json(&["reduce", "--i", "5", "--j", "0"]);
    assert_eq!(v["coefficients"], serde_json::json!([]));
    let (_, v) = ok_json(&["reduce", "--lambda", "1/2", "--i", "0", "--j", "4"]);
    let c = v["coefficients"].as_array().unwrap();
    assert_eq!(c.len(), 5);
    assert_eq!(c[0], "0 + 0*s [pi^0]");
    let (_, f) = ok_json(&["reduce", "--lambda", "0.5", "--i", "0", "--j", "4", "--float"]);
    assert_eq!(f["coefficients"].as_array().unwrap().len(), 5);
}

#[test]
fn abelian_worked_example() {
    let (_dir, path) = sys31();
    let (_, v) = ok_json(&["abelian", "--pert", &path]);
    let alpha: Vec<f64> = v["alpha_f64"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let pi = std::f64::consts::PI;
    for (a, e) in alpha.iter().zip([-4.0 * pi, 55.0 * pi, -162.5 * pi, 125.0 * pi]) {
        assert!((a - e).abs() < 1e-12 * e.abs(), "{a} vs {e}");
    }
    assert_eq!(v["zeros"]["count"], 3);
}

#[test]
fn zeros_worked_example() {
    let (_dir, path) = sys31();
    let (_, v) = ok_json(&["zeros", "--pert", &path]);
    assert_eq!(v["count"], 3);
    let exact: Vec<&str> = v["roots"].as_array().unwrap().iter().map(|r| r["exact"].as_str().unwrap()).collect();
    assert_eq!(exact, ["1/10", "2/5", "4/5"]);
    let (_, f) = ok_json(&["zeros", "--pert", &path, "--float"]);
    assert_eq!(f["count"], 3);
}

#[test]
fn synth_output_feeds_back() {
    let (_, v) = ok_json(&["synth", "--lambda", "1/2", "--zeros", "1/3,1/2"]);
    let dir = TempDir::new().unwrap();
    let p = fixture(dir.path(), "syn.json", &v["perturbation"].to_string());
    let (_, z) = ok_json(&["zeros", "--pert", p.to_str().unwrap()]);
    let exact: Vec<&str> = z["roots"].as_array().unwrap().iter().map(|r| r["exact"].as_str().unwrap()).collect();
    assert_eq!(exact, ["1/3", "1/2"]);
}

#[test]
fn simulate_worked_example() {
    let (_dir, path) = sys31();
    let (_, v) = ok_json(&["simulate", "--pert", &path, "--eps", "1e-4", "--h-max", "1.2"]);
    let cycles = v["cycles"].as_array().unwrap();
    assert_eq!(cycles.len(), 3);
    for (c, z) in cycles.iter().zip([0.1, 0.4, 0.8]) {
        assert!((c["energy"].as_f64().unwrap() - z).abs() < 0.05);
    }
    let csv = abelian(&["simulate", "--pert", &path, "--grid", "20", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("x0,h,displacement\n"));
    assert_eq!(text.lines().count(), 21);
}

#[test]
fn orbit_and_oval_data() {
    let (_dir, path) = sys31();
    let (_, v) = ok_json(&["simulate", "--pert", &path, "--eps", "0", "--orbit-x0", "0.5", "--revolutions", "2"]);
    assert_eq!(v["crossings"].as_array().unwrap().len(), 2);
    let (_, o) = ok_json(&["oval", "--lambda", "1/2", "--h", "1", "--count", "16"]);
    assert_eq!(o["points"].as_array().unwrap().len(), 16);
    let (_, r) = ok_json(&["oval", "--lambda", "1/2", "--h", "1", "--i", "0", "--j", "1"]);
    let val = r["row"]["value"].as_f64().unwrap();
    assert!((val + 2.0 * std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn normalize_and_verify() {
    let (_, v) = ok_json(&["normalize", "--k1", "1", "--k2", "1/2", "--k3", "1", "--k4", "2"]);
    assert_eq!(v["lambda"], "1/2");
    let (_, r) = ok_json(&["verify", "--n", "4", "--samples", "5"]);
    assert_eq!(r["passed"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["reduce", "--i", "50", "--j", "1"]), 2);
    assert_eq!(code(&["reduce", "--lambda", "3/2", "--i", "0", "--j", "1"]), 3);
    assert_eq!(code(&["abelian", "--pert", "/nonexistent/p.json"]), 2);
    assert_eq!(code(&["normalize", "--k1", "1", "--k2", "1", "--k3", "0", "--k4", "1"]), 3);
    assert_eq!(code(&["reduce", "--i", "1", "--j", "1", "--format", "csv"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["verify", "--n", "3", "--samples", "2", "--tol", "1e-30"]), 4);
    assert_eq!(code(&["synth", "--zeros", "1/3,1/3"]), 3);
}

#[test]
fn output_is_deterministic() {
    let (_dir, path) = sys31();
    for args in [
        vec!["verify", "--n", "3", "--samples", "8", "--seed", "11"],
        vec!["simulate", "--pert", &path, "--grid", "40", "--threads", "3"],
        vec!["synth", "--zeros", "1/10,2/5,4/5"],
    ] {
        let a = abelian(&args).stdout;
        let b = abelian(&args).stdout;
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn json_output_is_a_fixed_point() {
    let (_dir, path) = sys31();
    let runs: Vec<Vec<&str>> = vec![
        vec!["normalize", "--k1", "2", "--k2", "1", "--k3", "3", "--k4", "-1"],
        vec!["reduce", "--lambda", "2/7", "--i", "3", "--j", "3"],
        vec!["abelian", "--pert", &path],
        vec!["zeros", "--pert", &path],
        vec!["synth", "--zeros", "1/4,3/4"],
        vec!["simulate", "--pert", &path, "--grid", "30"],
        vec!["oval", "--h", "0.5", "--count", "8"],
    ];
    for args in runs {
        let (text, v) = ok_json(&args);
        let again = format!("{}\n", serde_json::to_string_pretty(&v).unwrap());
        assert_eq!(text, again, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("r.json");
    let out = abelian(&["reduce", "--i", "0", "--j", "2", "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(target).unwrap()).unwrap();
    assert_eq!(v["j"], 2);
}
