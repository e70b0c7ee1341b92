//! End-to-end tests of the binary: flags, exit codes, output formats,
//! determinism, and scenario execution.

use std::process::{Command, Output};

fn qgal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgal")).args(args).output().expect("binary runs")
}

#[test]
fn verify_single_suite_exits_zero() {
    let out = qgal(&["verify", "classical"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[pass] classical/group-law-associativity"));
    assert!(text.contains("checks passed"));
}

#[test]
fn missing_suite_list_is_a_usage_error() {
    let out = qgal(&["verify"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = qgal(&["verify", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
}

#[test]
fn out_of_range_degree_is_a_usage_error() {
    let out = qgal(&["verify", "hopf", "--max-degree", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_report_round_trips() {
    let out = qgal(&["verify", "classical", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("valid JSON report");
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["passed"], doc["total"]);
    let checks = doc["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert!(c["suite"].is_string() && c["key"].is_string() && c["passed"].is_boolean());
    }
}

#[test]
fn reports_are_deterministic() {
    let a = qgal(&["verify", "classical", "d7", "--format", "json", "--seed", "7"]);
    let b = qgal(&["verify", "classical", "d7", "--format", "json", "--seed", "7"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn suite_flag_form_is_equivalent_to_positional() {
    let a = qgal(&["verify", "--suite", "adjoint", "--format", "json"]);
    let b = qgal(&["verify", "adjoint", "--format", "json"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn text_report_lists_failures_first() {
    // all shipped checks pass, so just assert the summary tail ordering
    let out = qgal(&["verify", "adjoint"]);
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.last().unwrap().ends_with("checks passed"));
    assert!(lines.iter().take(lines.len() - 1).all(|l| l.starts_with("[pass]")));
}

#[test]
fn scenario_runs_and_reports_metrics() {
    let dir = std::env::temp_dir().join(format!("qgal-scenario-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("boost.json");
    std::fs::write(
        &cfg_path,
        r#"{
            "constants": {"hbar": 1.0, "kappa": 1.0, "m_a": 10.0, "m_b": 1.0},
            "grid_a": {"n": 128, "x_min": -40.0, "x_max": 40.0},
            "grid_b": {"n": 128, "x_min": -20.0, "x_max": 20.0},
            "frame": [{"center_x": 0.0, "center_p": 2.0, "width": 2.0}],
            "particle": {"center_x": 0.0, "center_p": 0.0, "width": 1.0},
            "ops": [{"op": "conditional_boost", "t": 0.0}]
        }"#,
    )
    .unwrap();
    let dump_path = dir.join("amps.txt");
    let out = qgal(&["scenario", cfg_path.to_str().unwrap(), "--dump-amplitudes", dump_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let norm = doc["final_norm"].as_f64().unwrap();
    assert!((norm - 1.0).abs() < 1e-9);
    let kick = doc["centroid_p_b"].as_f64().unwrap();
    assert!((kick - 0.2).abs() < 1e-3, "momentum kick {kick}");
    let dump = std::fs::read_to_string(&dump_path).unwrap();
    assert!(dump.lines().count() > 128 * 128);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_wavesim_with_scenario_attaches_metrics() {
    let dir = std::env::temp_dir().join(format!("qgal-verify-scn-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("tiny.json");
    std::fs::write(
        &cfg_path,
        r#"{
            "constants": {"hbar": 1.0, "kappa": 1.0, "m_a": 10.0, "m_b": 1.0},
            "grid_a": {"n": 64, "x_min": -40.0, "x_max": 40.0},
            "grid_b": {"n": 64, "x_min": -20.0, "x_max": 20.0},
            "frame": [{"center_x": 0.0, "center_p": 1.0, "width": 2.0}],
            "particle": {"center_x": 0.0, "center_p": 0.0, "width": 1.0},
            "ops": [{"op": "classical_translation", "a": 1.0}]
        }"#,
    )
    .unwrap();
    let out = qgal(&["verify", "wavesim", "--scenario", cfg_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("wavesim/scenario-metrics"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bad_scenario_config_is_a_usage_error() {
    let dir = std::env::temp_dir().join(format!("qgal-badcfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("bad.json");
    std::fs::write(&cfg_path, "{\"constants\": 7}").unwrap();
    let out = qgal(&["scenario", cfg_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
