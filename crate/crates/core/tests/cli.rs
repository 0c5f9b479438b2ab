use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn rilab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rilab")).args(args).output().expect("binary runs")
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("run.toml");
    std::fs::write(&p, body).unwrap();
    p
}

const SMALL: &str = r#"
seed = 11
family_size = 12

[manifold]
kind = "sphere"
n = 3
m = 64
k = 6

[flow]
dt = 0.002
steps = 10
"#;

#[test]
fn sphere_config_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("sphere.toml");
    let out = rilab(&["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let names: Vec<String> =
        std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    assert!(names.iter().filter(|n| n.starts_with("reports_")).count() >= 5);
    for f in ["summary.csv", "manifest.json", "trajectory.csv", "ultracontractivity.csv", "kappa.csv", "constants.json"] {
        assert!(names.iter().any(|n| n == f), "missing {f}");
    }
    assert!(!names.iter().any(|n| n.ends_with(".tmp")));
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(summary.starts_with("name,slack_min,pass_rate,count\n"));
}

#[test]
fn suite_and_seed_flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out_dir = dir.path().join("out");
    let out = rilab(&[
        "run", "--config", cfg.to_str().unwrap(), "--suite", "euclidean", "--seed", "5", "--out", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out_dir.join("reports_euclidean.json").exists());
    assert!(!out_dir.join("reports_lsi.json").exists());
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["seed"], 5);
}

#[test]
fn cfl_violation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SMALL.replace("m = 64", "m = 128").replace("dt = 0.002", "dt = 0.02").replace("steps = 10", "steps = 5"));
    let out = rilab(&["run", "--config", cfg.to_str().unwrap(), "--suite", "flow"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).to_lowercase().contains("cfl"));
}

#[test]
fn bad_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &SMALL.replace("kind = \"sphere\"", "kind = \"torus\""));
    assert_eq!(rilab(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("nope.toml");
    assert_eq!(rilab(&["run", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn empty_suite_list_writes_only_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("suites = []\n{SMALL}"));
    let out_dir = dir.path().join("out");
    let out = rilab(&["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let names: Vec<_> = std::fs::read_dir(&out_dir).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names, vec![std::ffi::OsString::from("manifest.json")]);
}

#[test]
fn merge_reads_reports_and_rejects_other_json() {
    let out = rilab(&["merge"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim_end(), "name,slack_min,pass_rate,count");

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out_dir = dir.path().join("out");
    rilab(&["run", "--config", cfg.to_str().unwrap(), "--suite", "euclidean", "--out", out_dir.to_str().unwrap()]);
    let reports = out_dir.join("reports_euclidean.json");
    let out = rilab(&["merge", reports.to_str().unwrap(), reports.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(text.lines().any(|l| l.starts_with("euclidean.entropy_equality,") && l.ends_with(",6")));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"not\": \"reports\"}").unwrap();
    assert_eq!(rilab(&["merge", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for o in [&a, &b] {
        let out = rilab(&["run", "--config", cfg.to_str().unwrap(), "--out", o.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for f in ["reports.json", "manifest.json", "constants.json", "lsi_constants.json", "summary.csv"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}
