//! End-to-end tests of the `jlps` binary: exit codes, report determinism,
//! seed overrides, and the CSV/JSON output contract.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jlps"))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

const SMALL_IDENTITY: &str = r#"
experiment = "identity"
k_list = [1, 2]

[ensemble]
count = 6
support_max = 8
seed = 42
distribution = "gaussian"

[[params]]
alpha = -0.5
beta = -0.5
"#;

fn run_identity(dir: &Path, extra: &[&str]) -> Output {
    let cfg = dir.join("identity.toml");
    write(&cfg, SMALL_IDENTITY);
    bin()
        .arg("identity")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap()
}

#[test]
fn identity_passes_with_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_identity(dir.path(), &[]);
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    let report = dir.path().join("out/identity_report.json");
    assert!(report.exists());
    let json: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(json["experiment"], "identity");
    assert_eq!(json["summary"]["pass"], true);
    assert!(json["cases"]["ratios"].as_array().unwrap().len() >= 12);
}

#[test]
fn reports_are_deterministic_modulo_run_meta() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("identity.toml");
    write(&cfg, SMALL_IDENTITY);
    let mut docs = Vec::new();
    for _ in 0..2 {
        let out = bin()
            .arg("identity")
            .arg("--config")
            .arg(&cfg)
            .arg("--out")
            .arg(dir.path().join("out"))
            .output()
            .unwrap();
        assert!(out.status.success());
        let text =
            std::fs::read_to_string(dir.path().join("out/identity_report.json")).unwrap();
        let mut json: Value = serde_json::from_str(&text).unwrap();
        json.as_object_mut().unwrap().remove("run_meta");
        docs.push(json);
    }
    assert_eq!(docs[0], docs[1]);
}

#[test]
fn seed_override_changes_cases() {
    let dir = tempfile::tempdir().unwrap();
    let base = run_identity(dir.path(), &[]);
    assert!(base.status.success());
    let first: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out/identity_report.json")).unwrap(),
    )
    .unwrap();
    let reseeded = run_identity(dir.path(), &["--seed", "7"]);
    assert!(reseeded.status.success());
    let second: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out/identity_report.json")).unwrap(),
    )
    .unwrap();
    assert_ne!(first["cases"]["ratios"], second["cases"]["ratios"]);
    assert_eq!(second["run_meta"]["seed"], 7);
}

#[test]
fn missing_config_is_exit_two() {
    let out = bin().arg("identity").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_toml_is_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    write(&cfg, "this is not toml = = =");
    let out = bin()
        .arg("identity")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_ensemble_is_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.toml");
    write(
        &cfg,
        r#"
[ensemble]
count = 0
support_max = 8
seed = 1
distribution = "gaussian"

[[params]]
alpha = -0.5
beta = -0.5
"#,
    );
    let out = bin()
        .arg("identity")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mismatched_experiment_name_is_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("identity.toml");
    write(&cfg, SMALL_IDENTITY);
    let out = bin()
        .arg("kernels")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_of_domain_params_is_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad_params.toml");
    write(
        &cfg,
        r#"
[[params]]
alpha = -1.5
beta = 0.0
"#,
    );
    let out = bin()
        .arg("identity")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn kernels_emits_grid_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("kernels.toml");
    write(
        &cfg,
        r#"
experiment = "kernels"

[kernels]
index_max = 6
times = [0.5, 2.0]
subordination_index_max = 3
subordination_times = [1.0]
semigroup_pairs = [[0.3, 0.9]]

[[params]]
alpha = -0.5
beta = -0.5
"#,
    );
    let out = bin()
        .arg("kernels")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let grid = std::fs::read_to_string(dir.path().join("out/kernels_grid.csv")).unwrap();
    let mut lines = grid.lines();
    assert_eq!(lines.next(), Some("t,m,n,value,path"));
    // 2 times x 28 (m <= n <= 6) pairs x 2 paths
    assert_eq!(lines.count(), 2 * 28 * 2);
}

#[test]
fn equivalence_with_table_weight_file() {
    let dir = tempfile::tempdir().unwrap();
    let wpath = dir.path().join("w.csv");
    let rows: Vec<String> = (0..1200).map(|n| format!("{n},{}", 1.0 + (n % 7) as f64)).collect();
    write(&wpath, &format!("n,w\n{}\n", rows.join("\n")));
    let cfg = dir.path().join("equiv.toml");
    write(
        &cfg,
        &format!(
            r#"
experiment = "equivalence"
p_list = [2.0]

[ensemble]
count = 4
support_max = 6
seed = 5
distribution = "rademacher"

[[params]]
alpha = 0.0
beta = 0.0

[[weights]]
kind = "table"
path = "{}"
"#,
            wpath.display()
        ),
    );
    let out = bin()
        .arg("equivalence")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn recheck_rederives_and_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_identity(dir.path(), &[]);
    assert!(out.status.success());
    let report_path = dir.path().join("out/identity_report.json");

    let ok = bin()
        .arg("recheck")
        .arg("--report")
        .arg(&report_path)
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));

    // Tamper with a summary number: recheck must flag it.
    let mut doc: Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    doc["verdicts"][0]["observed"] = Value::from(0.123);
    std::fs::write(&report_path, serde_json::to_string(&doc).unwrap()).unwrap();
    let bad = bin()
        .arg("recheck")
        .arg("--report")
        .arg(&report_path)
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("MISMATCH"));
}

#[test]
fn missing_weight_table_is_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("equiv.toml");
    write(
        &cfg,
        r#"
experiment = "equivalence"
p_list = [2.0]

[ensemble]
count = 2
support_max = 4
seed = 5
distribution = "gaussian"

[[params]]
alpha = 0.0
beta = 0.0

[[weights]]
kind = "table"
path = "does_not_exist.csv"
"#,
    );
    let out = bin()
        .arg("equivalence")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
