use std::path::PathBuf;
use std::process::{Command, Output};

fn setconv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setconv")).args(args).output().expect("binary runs")
}

fn config(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    root.to_string_lossy().into_owned()
}

#[test]
fn slln_writes_rows_verdicts_and_chart() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let res = setconv(&["slln", "--config", &config("coin_flip.json"), "--out", out.to_str().unwrap(), "--svg"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let csv = std::fs::read_to_string(out.join("rows.csv")).unwrap();
    assert!(csv.starts_with("n,h_convex,fisher_e,fisher_probe_deficit,wijsman_error,h_raw,prune_error_bound\n"));
    assert!(out.join("verdicts.json").exists() && out.join("chart.svg").exists());
}

#[test]
fn seed_sweep_writes_one_directory_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let res = setconv(&[
        "slln",
        "--config",
        &config("nonconvex_pair.json"),
        "--seed",
        "4",
        "--seeds",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(res.status.success());
    for s in 4..7 {
        assert!(dir.path().join(format!("seed-{s}/rows.csv")).exists());
    }
    let sweep: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sweep.json")).unwrap()).unwrap();
    assert!(sweep.is_object());
    assert!(String::from_utf8_lossy(&res.stdout).contains("sweep: "));
}

#[test]
fn converge_reports_all_three_modes() {
    let dir = tempfile::tempdir().unwrap();
    let res = setconv(&["converge", "--config", &config("converge_segments.json"), "--out", dir.path().to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let stdout = String::from_utf8_lossy(&res.stdout);
    for mode in ["hausdorff", "fisher", "wijsman"] {
        assert!(stdout.contains(mode));
    }
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn demos_succeed() {
    for scenario in ["averaging", "spikes", "coin-flip"] {
        let res = setconv(&["demo", scenario]);
        assert!(res.status.success(), "{scenario}: {}", String::from_utf8_lossy(&res.stdout));
    }
}

#[test]
fn oracle_writes_one_row_per_instance() {
    let dir = tempfile::tempdir().unwrap();
    let res = setconv(&["oracle", "--instances", "25", "--seed", "9", "--out", dir.path().to_str().unwrap()]);
    assert!(res.status.success());
    let csv = std::fs::read_to_string(dir.path().join("oracle.csv")).unwrap();
    assert_eq!(csv.lines().count(), 26);
    assert!(String::from_utf8_lossy(&res.stdout).contains("25/25"));
}

#[test]
fn bad_inputs_exit_with_an_error() {
    let res = setconv(&["slln", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("/nonexistent/cfg.json"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"random_set": {"dim": 1, "atoms": []}, "n_max": 10}"#).unwrap();
    let res = setconv(&["slln", "--config", path.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(2));
    assert!(!setconv(&["demo", "nope"]).status.success());
}
