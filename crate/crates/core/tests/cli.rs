//! End-to-end checks of the command-line surface: flag validation, exit
//! codes, output formats, and byte-identical reruns.

use std::path::Path;
use std::process::{Command, Output};

fn hyperrec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperrec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn hyperrec_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperrec"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).expect("output file")
}

#[test]
fn exact_pmf_emits_the_known_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pmf.csv");
    let out = hyperrec(&[
        "exact",
        "pmf",
        "--theta",
        "2",
        "--n",
        "2",
        "--k",
        "1",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = read(&csv);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,num,den,p"));
    assert!(lines.next().unwrap().starts_with("1,2,3,"));
    assert!(lines.next().unwrap().starts_with("2,1,3,"));
    assert!(!text.contains('\r'), "LF line endings only");
}

#[test]
fn exact_cov_asymptotic_values() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("cov.json");
    let out = hyperrec(&[
        "exact",
        "cov",
        "--theta",
        "2",
        "--asymptotic",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&read(&json)).unwrap();
    assert_eq!(value["var1"]["num"], "1");
    assert_eq!(value["var1"]["den"], "12");
    assert_eq!(value["cov12"]["num"], "-7");
    assert_eq!(value["cov12"]["den"], "72");
    assert_eq!(value["var2"]["num"], "71");
    assert_eq!(value["var2"]["den"], "432");
}

#[test]
fn simulate_theta2_one_step_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sim.csv");
    let out = hyperrec(&[
        "simulate",
        "--theta",
        "2",
        "--steps",
        "1",
        "--replicates",
        "5",
        "--seed",
        "1",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = read(&csv);
    for (i, line) in text.lines().skip(1).enumerate() {
        assert_eq!(line, format!("{i},2,1"));
    }
}

#[test]
fn simulate_emit_state_has_the_right_size() {
    let out = hyperrec(&[
        "simulate",
        "--theta",
        "3",
        "--steps",
        "2",
        "--replicates",
        "1",
        "--seed",
        "7",
        "--emit-state",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["theta"], 3);
    assert_eq!(value["age"], 2);
    assert_eq!(value["containment"].as_array().unwrap().len(), 5);
    assert_eq!(value["edges"].as_array().unwrap().len(), 3);
}

#[test]
fn subcommands_rerun_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let mut artifacts = Vec::new();
    for tag in ["a", "b"] {
        let json = dir.path().join(format!("sim_{tag}.json"));
        let csv = dir.path().join(format!("sim_{tag}.csv"));
        let out = hyperrec(&[
            "simulate",
            "--theta",
            "3",
            "--steps",
            "50",
            "--replicates",
            "200",
            "--seed",
            "42",
            "--track-vertex",
            "5",
            "--json",
            json.to_str().unwrap(),
            "--csv",
            csv.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        artifacts.push((stdout(&out), read(&json), read(&csv)));
    }
    assert_eq!(artifacts[0], artifacts[1]);
}

#[test]
fn usage_errors_exit_2() {
    // rejected by our validation
    let out = hyperrec(&[
        "simulate",
        "--theta",
        "1",
        "--steps",
        "5",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // rejected by clap (missing --seed)
    let out = hyperrec(&["simulate", "--theta", "3", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(2));
    // k > n
    let out = hyperrec(&["exact", "pmf", "--theta", "2", "--n", "2", "--k", "5"]);
    assert_eq!(out.status.code(), Some(2));
    // inconsistent regime flags
    let out = hyperrec(&["limits", "local", "--regime", "intermediate", "--theta", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hyperrec(&[
        "limits", "local", "--regime", "late", "--theta", "3", "--alpha", "0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn capacity_errors_exit_3() {
    let out = hyperrec(&["exact", "pmf", "--theta", "2", "--n", "5000", "--k", "0"]);
    assert_eq!(out.status.code(), Some(3));
    let out = hyperrec(&["oracle", "dp", "--theta", "2", "--n", "40"]);
    assert_eq!(out.status.code(), Some(3));
    let out = hyperrec(&["oracle", "histories", "--theta", "3", "--n", "9"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn table_cap_env_and_flag_precedence() {
    // environment lowers the cap
    let out = hyperrec_env(
        &["exact", "pmf", "--theta", "2", "--n", "50", "--k", "0"],
        "HYPERREC_TABLE_CAP",
        "10",
    );
    assert_eq!(out.status.code(), Some(3));
    // explicit flag overrides the environment
    let out = hyperrec_env(
        &[
            "exact",
            "pmf",
            "--theta",
            "2",
            "--n",
            "50",
            "--k",
            "0",
            "--table-cap",
            "60",
        ],
        "HYPERREC_TABLE_CAP",
        "10",
    );
    assert!(out.status.success());
}

#[test]
fn oracle_histories_tiny_case() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("hist.json");
    let out = hyperrec(&[
        "oracle",
        "histories",
        "--theta",
        "2",
        "--n",
        "1",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&read(&json)).unwrap();
    let outcomes = value["outcomes"].as_array().unwrap();
    assert_eq!(outcomes.len(), 2);
    for outcome in outcomes {
        assert_eq!(outcome["prob"]["num"], "1");
        assert_eq!(outcome["prob"]["den"], "2");
    }
}

#[test]
fn oracle_dp_initial_mass() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("dp.json");
    let out = hyperrec(&[
        "oracle",
        "dp",
        "--theta",
        "3",
        "--n",
        "0",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&read(&json)).unwrap();
    assert_eq!(value["3,0"]["num"], "1");
    assert_eq!(value["3,0"]["den"], "1");
}

#[test]
fn limits_subcommands_describe_the_laws() {
    let out = hyperrec(&[
        "limits",
        "local",
        "--regime",
        "late",
        "--theta",
        "4",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["kind"], "point_mass");
    assert_eq!(value["value"], 1);

    let out = hyperrec(&[
        "limits",
        "local",
        "--regime",
        "intermediate",
        "--alpha",
        "0.5",
        "--theta",
        "3",
    ]);
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["kind"], "shifted_poisson");
    let rate = value["rate"].as_f64().unwrap();
    assert!((rate - 2.0 * std::f64::consts::LN_2).abs() < 1e-12);

    let out = hyperrec(&["limits", "global", "--theta", "2"]);
    let value: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(value["centering"], "n/2");
    assert_eq!(value["scale"], "sqrt(n)");
    assert_eq!(value["limit_variance"]["num"], "1");
    assert_eq!(value["limit_variance"]["den"], "12");
}

#[test]
fn global_martingale_column_present_when_requested() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("m.csv");
    let out = hyperrec(&[
        "simulate",
        "--theta",
        "2",
        "--steps",
        "10",
        "--replicates",
        "3",
        "--seed",
        "9",
        "--record-martingale",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = read(&csv);
    assert!(text.starts_with("replicate,x1,x2,martingale\n"));
    assert_eq!(text.lines().count(), 4);
}
