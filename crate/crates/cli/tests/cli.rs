//! End-to-end tests driving the built binary.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drinfeld-ss"))
        .args(args)
        .env_remove("DRINSS_Q")
        .env_remove("DRINSS_P")
        .env_remove("DRINSS_D")
        .output()
        .expect("binary runs")
}

#[test]
fn hpoly_f9_passes_with_expected_shape() {
    let out = run(&["hpoly", "--q", "3", "--p", "1,0,1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["d"], 2);
    assert_eq!(v["degree"], 4);
    assert_eq!(v["separable"], true);
    assert_eq!(v["pass"], true);
    assert_eq!(
        v["routes_agree"],
        serde_json::json!(["explicit", "symbolic", "recursion", "closed_form"])
    );
}

#[test]
fn hpoly_smallest_case_coefficients() {
    let out = run(&["hpoly", "--q", "2", "--p", "1,1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // H = λ + 1 over F_2
    assert_eq!(v["H_coeffs"], serde_json::json!([[[1]], [[1]]]));
    // no δ exists at even q, so the period check reports null
    assert_eq!(v["truncated_period_ok"], serde_json::Value::Null);
}

#[test]
fn ideal_t_is_a_config_error() {
    let out = run(&["hpoly", "--q", "2", "--p", "0,1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("T is excluded"), "stderr: {err}");
}

#[test]
fn tower_csv_matches_known_rows() {
    let out = run(&["tower", "--q", "2", "--p", "1,1", "--nmax", "10", "--format", "csv"]);
    assert!(out.status.success());
    let csv = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,N_lower,genus,ratio_num,ratio_den,ratio_decimal,target");
    assert_eq!(lines[8], "8,512,465,512,465,1.101075,1");
    assert_eq!(lines[10], "10,2048,1953,2048,1953,1.048643,1");
}

#[test]
fn auto_degree_selection_is_deterministic() {
    let a = run(&["hpoly", "--q", "3", "--d", "2"]);
    let b = run(&["hpoly", "--q", "3", "--p", "auto:2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["p_of_T"], serde_json::json!([1, 0, 1]));
}

#[test]
fn identical_config_gives_byte_identical_output() {
    let a = run(&["tower", "--q", "3", "--d", "1", "--nmax", "6"]);
    let b = run(&["tower", "--q", "3", "--d", "1", "--nmax", "6"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_matrix_passes() {
    let out = run(&["sweep", "--q", "2,3", "--d", "1,2", "--jobs", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), 4);
    assert_eq!(v["pass"], true);
}

#[test]
fn keylemma_counts() {
    let out = run(&["keylemma", "--dmax", "6"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let pairs: Vec<u64> = v["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["pairs"].as_u64().unwrap())
        .collect();
    assert_eq!(pairs, vec![1, 2, 3, 5, 8, 13]);
    // the degree cap is enforced
    let out = run(&["keylemma", "--dmax", "9"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_check_group_is_rejected() {
    let out = run(&["hpoly", "--q", "2", "--p", "1,1", "--checks", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown check group"));
}

#[test]
fn checks_subset_controls_the_verdict() {
    let out = run(&["hpoly", "--q", "2", "--p", "1,1", "--checks", "routes,jcount"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn env_variable_overrides_work() {
    let out = Command::new(env!("CARGO_BIN_EXE_drinfeld-ss"))
        .args(["hpoly"])
        .env("DRINSS_Q", "2")
        .env("DRINSS_P", "1,1")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["q"], 2);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("drinfeld-ss-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bundle.json");
    let out = run(&[
        "hpoly",
        "--q",
        "2",
        "--p",
        "1,1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    std::fs::remove_file(&path).ok();
}
