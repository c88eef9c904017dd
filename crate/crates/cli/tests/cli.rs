use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_akns-multiform")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn derive_nls_hamiltonian_in_qr() {
    let o = run(&["derive", "H", "--i", "1", "--j", "2", "--coords", "qr"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(-1/4)*q_1*r_1 + (1/4)*q^2*r^2\n");
}

#[test]
fn derive_flows_and_forms() {
    let o = run(&["derive", "flow", "--time", "1", "--var", "e1"]);
    assert_eq!(stdout(&o), "(-2i)*e2\n");
    let o = run(&["derive", "omega", "--k", "1", "--coords", "qr"]);
    assert_eq!(stdout(&o), "(1/2i) * δ[q] ∧ δ[r]\n");
    let o = run(&["derive", "L", "--i", "1", "--j", "2", "--coords", "qr"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("q_d{2:1}"));
}

#[test]
fn order_below_minimum_is_a_usage_error() {
    let o = run(&["derive", "H", "--i", "1", "--j", "2", "--order", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("minimum is 4"));
    let o = run(&["derive", "H", "--i", "1", "--j", "2", "--order", "6"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn unknown_commands_and_flags_exit_with_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "darboux", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["derive", "H", "--i", "1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "all", "--i", "1"]).status.code(), Some(2));
}

#[test]
fn rmatrix_at_time_three_passes() {
    let o = run(&["verify", "rmatrix", "--time", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS rmatrix(k=3)\n"));
}

#[test]
fn empty_run_prints_an_empty_array() {
    let o = run(&["verify", "closure", "--max-time", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[]\n");
}

#[test]
fn json_records_follow_the_schema() {
    let o = run(&["verify", "darboux", "--k", "3", "--format", "json"]);
    let text = stdout(&o);
    assert!(text.ends_with("]\n"));
    assert!(text.starts_with("[{\"check\":\"darboux\",\"params\":{\"k\":3},\"status\":\"pass\",\"millis\":"));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
}

#[test]
fn full_suite_passes_and_is_deterministic() {
    let a = run(&["verify", "all", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let records: Vec<serde_json::Value> = serde_json::from_str(&stdout(&a)).unwrap();
    let checks: std::collections::BTreeSet<&str> = records
        .iter()
        .map(|r| r["check"].as_str().unwrap().split(' ').next().unwrap())
        .collect();
    for c in [
        "darboux", "closure", "el", "legendre", "omega1", "rmatrix", "pb-lemma", "zc-hamiltonian", "conservation",
        "jacobi", "flow-commute",
    ] {
        assert!(checks.contains(c), "missing {c}");
    }
    assert!(records.iter().all(|r| r["status"] == "pass" && r.get("witness").is_none()));

    let strip = |o: &Output| {
        let mut v: Vec<serde_json::Value> = serde_json::from_str(&stdout(o)).unwrap();
        for r in &mut v {
            r.as_object_mut().unwrap().remove("millis");
        }
        v
    };
    let b = Command::new(env!("CARGO_BIN_EXE_akns-multiform"))
        .args(["verify", "all", "--format", "json"])
        .env("AKNS_MULTIFORM_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn text_output_is_byte_identical() {
    let a = run(&["verify", "pb-lemma", "--max-time", "2"]);
    let b = run(&["verify", "pb-lemma", "--max-time", "2"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("5 checks, 0 failed\n"));
}

#[test]
fn thread_variable_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_akns-multiform"))
        .args(["verify", "darboux", "--k", "1"])
        .env("AKNS_MULTIFORM_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
