use std::path::Path;
use std::process::{Command, Output};

fn posfactor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posfactor")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn positive_target_is_one_exact_factor() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "p.json", "[[2, 1], [1, 2]]");
    let out = posfactor(&["factor", "--input", &input, "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["factorization"]["factors"].as_array().unwrap().len(), 1);
    assert_eq!(v["factorization"]["error"], 0.0);
    assert_eq!(v["verification"]["passed"], true);
}

#[test]
fn negative_determinant_exits_with_obstruction() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "neg.json", "[[-1, 0], [0, 1]]");
    let out = posfactor(&["factor", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("determinant"));
    assert!(out.stdout.is_empty());

    let out = posfactor(&["factor", "--input", &input, "--perturb", "--verify", "--schedule", "8,8"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["perturbation"]["distance"].as_f64().unwrap() > 0.0);
}

#[test]
fn singular_target_exits_with_obstruction() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.json", "[[1, 1], [1, 1]]");
    assert_eq!(posfactor(&["factor", "--input", &input]).status.code(), Some(2));
    let out = posfactor(&["factor", "--input", &input, "--perturb", "--eps", "0.01", "--schedule", "4,4", "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn upper_triangular_target_at_sixteen() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "t.json", "[[2, 1], [0, 1]]");
    let fact = dir.path().join("f.json");
    let out = posfactor(&["factor", "--input", &input, "--schedule", "16,16", "--verify", "--out", fact.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&fact).unwrap()).unwrap();
    assert!(v["factorization"]["error"].as_f64().unwrap() < 0.1);
    assert_eq!(v["verification"]["passed"], true);

    let out = posfactor(&["verify", "--input", fact.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["passed"], true);
}

#[test]
fn tampered_factorization_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let fact = dir.path().join("f.json");
    assert!(posfactor(&["factor", "--n", "2", "--schedule", "2,2", "--out", fact.to_str().unwrap()]).status.success());
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&fact).unwrap()).unwrap();
    v["factorization"]["error"] = serde_json::json!(0.0);
    std::fs::write(&fact, v.to_string()).unwrap();
    let out = posfactor(&["verify", "--input", fact.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn commuting_sweep_skips_order_fit() {
    let out = posfactor(&["sweep-trotter", "--n", "3", "--commuting", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["orderSkipped"], true);
    assert!(v["order"].is_null());
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["error"].as_f64().unwrap() <= 1e-10));
}

#[test]
fn commutator_sweep_csv_counts() {
    let out = posfactor(&["sweep-commutator", "--steps", "4,16"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,error,factors,predicted");
    assert!(lines[2].starts_with("16,") && lines[2].ends_with(",768,768"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fitted order"));
}

#[test]
fn obstruction_landscape_for_n_one() {
    let out = posfactor(&["obstruction", "--n", "1", "--grid", "8", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    let accepted: Vec<_> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["bestDistance"].as_f64().unwrap() < 0.25)
        .collect();
    assert_eq!(accepted.len(), 1);
    assert_eq!(accepted[0]["lambda"], serde_json::json!([1.0, 0.0]));
}

#[test]
fn obstruction_guards_large_n() {
    assert_eq!(posfactor(&["obstruction", "--n", "5"]).status.code(), Some(1));
}

#[test]
fn density_table() {
    let out = posfactor(&["density", "--eps", "0.5,2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("epsilon,m,N,gap,productDefect,pass"));
    assert!(lines.next().unwrap().starts_with("5.00000000000000e-1,26,676,"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn config_errors_exit_one() {
    assert_eq!(posfactor(&["density", "--eps", "3"]).status.code(), Some(1));
    assert_eq!(posfactor(&["factor", "--input", "/nonexistent/target.json"]).status.code(), Some(1));
    assert_eq!(posfactor(&["sweep-trotter", "--schedule", "bad"]).status.code(), Some(1));
    assert_eq!(posfactor(&["no-such-command"]).status.code(), Some(1));
    let budget = posfactor(&["factor", "--schedule", "16,16", "--max-factors", "10"]);
    assert_eq!(budget.status.code(), Some(1));
}

#[test]
fn tolerance_environment_is_honored() {
    let bad = Command::new(env!("CARGO_BIN_EXE_posfactor"))
        .args(["density"])
        .env("POSFACTOR_TOL", "hermitian")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let good = Command::new(env!("CARGO_BIN_EXE_posfactor"))
        .args(["density", "--eps", "1"])
        .env("POSFACTOR_TOL", "hermitian=1e-9,det_real=1e-7")
        .output()
        .unwrap();
    assert!(good.status.success());
}

#[test]
fn help_exits_zero() {
    assert_eq!(posfactor(&["--help"]).status.code(), Some(0));
}
