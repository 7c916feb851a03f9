use std::process::Command;

use serde_json::Value;
use vircat::cli::dispatch;

fn run(args: &[&str]) -> vircat::cli::Outcome {
    dispatch(["vircat", "--no-cache"].iter().chain(args))
}

#[test]
fn out_of_range_m_is_a_usage_error() {
    let out = run(&["invariants", "--m", "999"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("999"));
}

#[test]
fn unknown_flag_is_a_usage_error_with_help() {
    let out = run(&["invariants", "--m", "5", "--frobnicate"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("Usage"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_vircat");
    let status = Command::new(bin).args(["--no-cache", "invariants", "--m", "999"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
    let out = Command::new(bin).args(["--no-cache", "invariants", "--m", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["m"], 4);
}

#[test]
fn invariants_at_eleven_with_labels() {
    let out = run(&["invariants", "--m", "11", "--label"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let labels: Vec<(&str, &str)> = v["invariants"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| (i["label"].as_str().unwrap(), i["type"].as_str().unwrap()))
        .collect();
    assert_eq!(labels, vec![("(A_10, A_11)", "I"), ("(A_10, D_7)", "II"), ("(A_10, E_6)", "I")]);
    assert_eq!(v["labels"].as_array().unwrap().len(), 55);
    let z = v["invariants"][2]["Z"].as_array().unwrap();
    assert_eq!(z.len(), 55);
    assert_eq!(z[0][0], 1);
}

#[test]
fn invariant_emitters() {
    let csv = run(&["invariants", "--m", "6", "--csv"]);
    assert_eq!(csv.code, 0);
    assert!(csv.stdout.starts_with("m,label,type,pi,Z\n"));
    assert_eq!(csv.stdout.lines().count(), 3);
    let md = run(&["--format", "md", "invariants", "--m", "6"]);
    assert!(md.stdout.contains("| 6 | (D_4, A_6) | I | id |"), "{}", md.stdout);
}

#[test]
fn reports_are_deterministic() {
    for args in [&["invariants", "--m", "9"][..], &["cocycle", "--system", "vir", "--m", "5", "--roundtrip", "5"], &["subcats", "--m", "9"]] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a, b);
    }
}

#[test]
fn modular_data_json_and_csv() {
    let out = run(&["modular-data", "--m", "3"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["labels"].as_array().unwrap().len(), 3);
    assert_eq!(v["S"][0][0], serde_json::json!([0.5, 0.0]));
    assert_eq!(v["c_exact"], "1/2");
    let csv = run(&["--format", "csv", "modular-data", "--m", "3"]);
    assert!(csv.stdout.contains("0.707106781187"));
}

#[test]
fn sixj_checks() {
    let out = run(&["sixj", "--k", "6", "--check", "orthogonality"]);
    assert_eq!(out.code, 0);
    let out = run(&["sixj", "--k", "5", "--scan-zeros"]);
    assert_eq!(out.code, 0);
    let out = run(&["sixj", "--k", "4", "--scan-zeros"]);
    assert_eq!(out.code, 1);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["zero_scan"]["zeros"][0], serde_json::json!([2, 2, 2, 2, 2, 2]));
}

#[test]
fn connection_checks() {
    assert_eq!(run(&["connection", "--system", "a", "--check"]).code, 0);
    let out = run(&["connection", "--system", "product", "--m", "9", "--check"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
}

#[test]
fn vanishing_reports() {
    let out = run(&["vanishing", "--m", "7"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["sigma"], "(1,1)");
    assert_eq!(run(&["vanishing", "--k", "9"]).code, 0);
}

#[test]
fn cocycle_group_modes() {
    let out = run(&["cocycle", "--group", "2x2", "--enumerate"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["classes"], 2);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, vircat::cocycle::planted_z2z2().to_json().to_string()).unwrap();
    let out = run(&["cocycle", "--group", "Z2xZ2", "--check", path.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["trivial"], false);
    assert_eq!(v["brute_force_trivial"], false);

    let out = run(&["cocycle", "--group", "2x2", "--check", "/nonexistent/c.json"]);
    assert_eq!(out.code, 2);
}

#[test]
fn cocycle_file_on_vir_system() {
    let (_, ring) = vircat::modular::minimal_model_data(4).unwrap();
    let sys = vircat::catalog::catalog_systems(4).unwrap().remove(0);
    assert_eq!(sys.ring.rank(), ring.rank());
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
    let c = vircat::cocycle::coboundary(&sys.ring, &vircat::cocycle::random_omega(&sys.ring, &mut rng));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, c.to_json().to_string()).unwrap();
    let out = run(&["cocycle", "--system", "vir", "--m", "4", "--check", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
}

#[test]
fn subcats_and_catalog() {
    let out = run(&["subcats", "--m", "8", "--md"]);
    assert!(out.stdout.contains("| 8 | (A_7, A_8) | SU(2)_6^even | trivial |"), "{}", out.stdout);
    let out = run(&["catalog", "--list", "--max-m", "6"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let names: Vec<&str> = v["systems"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names, vec!["(A_2, A_3)", "(A_3, A_4)", "(A_4, A_5)", "(A_4, D_4)", "(A_5, A_6)", "(D_4, A_6)"]);
    assert_eq!(run(&["catalog"]).code, 2);
}

#[test]
fn verify_all_small() {
    let out = run(&["verify-all", "--max-m", "6", "--samples", "5"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 9);
    let all = suites.iter().all(|s| s["passed"] == true);
    assert_eq!(out.code, if all { 0 } else { 1 });
    for id in [1, 2, 4, 5, 6, 7, 9] {
        assert_eq!(suites[id - 1]["passed"], true, "{}", suites[id - 1]);
    }
}

#[test]
fn tolerance_is_validated() {
    assert_eq!(run(&["--tolerance", "0.5", "catalog", "--list"]).code, 2);
}
