//! End-to-end tests of the `elc` binary: exit codes, error wording,
//! byte-identical reruns and snapshot restarts.

use std::path::{Path, PathBuf};
use std::process::Command;

fn elc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_elc"))
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path
}

const SMALL_RUN: &str = r#"{
  "grid": {"dim": 2, "n": 16},
  "mu": [0.0, -0.5, 0.5, 1.0, 0.2, 0.2],
  "eps_penalty": 1.0,
  "dt": 1e-3,
  "t_end": 0.02,
  "init": {"type": "random_smooth", "seed": 3, "band": 2,
           "v_amplitude": 0.3, "d_amplitude": 0.4},
  "sample_every": 2,
  "snapshot_every": 10
}"#;

#[test]
fn coeffs_reports_case_i_for_the_sphere_like_set() {
    let out = elc()
        .args(["coeffs", "--mu", "0,-0.5,0.5,1,0.2,0.2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["regime"], "CaseI");
    assert_eq!(parsed["lambda1"], -1.0);
    assert!((parsed["margin"].as_f64().unwrap() - 0.4).abs() < 1e-12);
}

#[test]
fn linstab_reports_the_reference_window() {
    let out = elc()
        .args(["linstab", "--mu", "0,0.5,1.35,0.05,0,1", "--epsilon-leslie", "0.15", "--m", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let parsed: serde_json::Value =
        serde_json::from_slice(&out.stdout).unwrap();
    assert!((parsed["theta0"].as_f64().unwrap() - 1.2933).abs() < 1e-3);
    assert!((parsed["cos2_theta0"].as_f64().unwrap() - 0.075).abs() < 1e-12);
    assert!((parsed["mode"]["growth_rate"].as_f64().unwrap() - 0.4725).abs() < 1e-12);
    assert_eq!(parsed["verdict"], "unstable");
}

#[test]
fn simulate_rejects_lambda1_zero_with_exit_1_naming_the_condition() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{
  "grid": {"dim": 2, "n": 16},
  "mu": [0.0, 0.5, 0.5, 1.0, 0.0, 0.0],
  "dt": 1e-3,
  "t_end": 0.01,
  "init": {"type": "taylor_green", "amplitude": 0.1, "wavenumber": 1}
}"#,
    );
    let out = elc()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("lama1a"), "stderr must cite the condition: {stderr}");
}

#[test]
fn blowup_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{
  "grid": {"dim": 2, "n": 16},
  "mu": [0.0, -0.5, 0.5, 1.0, 0.2, 0.2],
  "dt": 0.05,
  "t_end": 5.0,
  "init": {"type": "random_smooth", "seed": 5, "band": 3,
           "v_amplitude": 3000.0, "d_amplitude": 0.2},
  "sample_every": 10
}"#,
    );
    let out = elc()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn missing_config_is_an_io_error_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = elc()
        .args(["simulate", "--config"])
        .arg(dir.path().join("does_not_exist.json"))
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn identical_invocations_produce_byte_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL_RUN);
    for name in ["a", "b"] {
        let out = elc()
            .args(["simulate", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(dir.path().join(name))
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for file in ["series.csv", "summary.json", "final.elc"] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
    }
}

#[test]
fn snapshot_restart_resumes_from_the_stored_state() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL_RUN);
    let out = elc()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("first"))
        .output()
        .unwrap();
    assert!(out.status.success());
    // Restart from the final snapshot with t_end extended past the stored t.
    let restart_cfg = format!(
        r#"{{
  "grid": {{"dim": 2, "n": 16}},
  "mu": [0.0, -0.5, 0.5, 1.0, 0.2, 0.2],
  "dt": 1e-3,
  "t_end": 0.01,
  "init": {{"type": "from_file", "path": "{}"}}
}}"#,
        dir.path().join("first").join("final.elc").display()
    );
    let cfg2 = dir.path().join("restart.json");
    std::fs::write(&cfg2, restart_cfg).unwrap();
    let out = elc()
        .args(["simulate", "--config"])
        .arg(&cfg2)
        .arg("--out")
        .arg(dir.path().join("second"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("second").join("summary.json")).unwrap(),
    )
    .unwrap();
    // Restart continues from t = 0.02 of the first run.
    let final_t = summary["final_t"].as_f64().unwrap();
    assert!((final_t - 0.03).abs() < 1e-9, "final_t = {final_t}");
}

#[test]
fn verify_small_passes_and_prints_a_table() {
    let out = elc().args(["verify", "--small"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 15);
    for line in text.lines() {
        assert!(line.starts_with("PASS"), "unexpected line: {line}");
    }
}

#[test]
fn verify_filter_selects_checks() {
    let out = elc().args(["verify", "--small", "--filter", "parodi"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.contains("parodi-cancellation"));
}

#[test]
fn cli_overrides_change_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL_RUN);
    let out = elc()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .args(["--t-end", "0.004", "--seed", "99"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out").join("summary.json")).unwrap(),
    )
    .unwrap();
    assert!((summary["final_t"].as_f64().unwrap() - 0.004).abs() < 1e-12);
}
