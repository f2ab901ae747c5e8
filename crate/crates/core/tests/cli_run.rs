//! End-to-end checks of the `covins` binary and the job runner.

use std::process::Command;

use covins_core::cli::{run, JobConfig, Task};

fn covins() -> Command {
    Command::new(env!("CARGO_BIN_EXE_covins"))
}

fn scratch_path(name: &str) -> std::path::PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("covins-test-{}-{}", std::process::id(), name));
    p
}

/// Strips the timestamp line so byte-level comparison sees only the
/// reproducible content.
fn without_timestamp(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"timestamp\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn reports_are_byte_identical_for_fixed_config_and_seed() {
    let cfg = scratch_path("determinism.json");
    std::fs::write(
        &cfg,
        r#"{ "task": "simulate", "fixture": "pauli-uniform", "seed": 7, "shots": 100000 }"#,
    )
    .unwrap();
    let run_once = || {
        let out = covins().arg("--config").arg(&cfg).output().unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        String::from_utf8(out.stdout).unwrap()
    };
    let a = run_once();
    let b = run_once();
    assert_eq!(without_timestamp(&a), without_timestamp(&b));
    assert!(a.contains("\"schema\": \"covins-report/1\""));
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn simulate_counts_sit_near_one_quarter() {
    let out = covins()
        .args(["--fixture", "pauli-uniform", "--task", "simulate", "--seed", "7"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let counts = report["artifacts"]["samples"]["counts"].as_array().unwrap();
    for c in counts {
        let c = c.as_u64().unwrap() as f64;
        assert!((c - 25_000.0).abs() < 4.0 * (100_000.0f64 * 0.25 * 0.75).sqrt());
    }
}

#[test]
fn dilate_task_reports_residuals_and_dim() {
    let out = covins()
        .args(["--fixture", "pauli-lueders", "--task", "dilate"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["artifacts"]["dim_k"], serde_json::json!(4));
    for check in report["checks"].as_array().unwrap() {
        assert_eq!(check["passed"], serde_json::json!(true), "{check}");
    }
}

#[test]
fn malformed_cayley_table_exits_nonzero_with_located_error() {
    let cfg = scratch_path("badgroup.json");
    std::fs::write(
        &cfg,
        r#"{ "task": "validate", "group": { "cayley_table": [[0, 1], [1, 1]] } }"#,
    )
    .unwrap();
    let out = covins().arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not a group"), "stderr: {err}");
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn broken_json_reports_line_and_column() {
    let cfg = scratch_path("badjson.json");
    std::fs::write(&cfg, "{ \"task\": \"validate\",\n  bad }").unwrap();
    let out = covins().arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "stderr: {err}");
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn failing_checks_exit_with_one() {
    // an explicit instrument that doubles the trace: validation must fail
    let cfg = scratch_path("breach.json");
    std::fs::write(
        &cfg,
        r#"{
            "task": "validate",
            "group": {"family": "trivial"},
            "representation": {"matrices": [[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]]},
            "instrument": {"dim": 2, "chois": [
                [[[2.0,0.0],[0.0,0.0],[0.0,0.0],[2.0,0.0]],
                 [[0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]],
                 [[0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]],
                 [[2.0,0.0],[0.0,0.0],[0.0,0.0],[2.0,0.0]]]
            ]}
        }"#,
    )
    .unwrap();
    let out = covins().arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn out_flag_writes_the_report_file() {
    let path = scratch_path("report.json");
    let out = covins()
        .args(["--fixture", "pauli", "--task", "enumerate-b"])
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["artifacts"]["admissible_dimension"], serde_json::json!(16));
    std::fs::remove_file(&path).ok();
}

#[test]
fn every_catalog_entry_passes_its_validation_suite() {
    for name in covins_core::fixtures::base_names() {
        let report = run(&JobConfig {
            task: Some(Task::Validate),
            fixture: Some(name.to_string()),
            ..Default::default()
        })
        .unwrap();
        assert!(report.passed, "fixture {name}: {}", report.to_json_string());
    }
    for name in covins_core::fixtures::instrument_names() {
        let report = run(&JobConfig {
            task: Some(Task::Validate),
            fixture: Some(name.clone()),
            ..Default::default()
        })
        .unwrap();
        assert!(report.passed, "fixture {name}: {}", report.to_json_string());
    }
}

#[test]
fn library_reports_are_reproducible_for_all_tasks() {
    for task in [
        Task::Validate,
        Task::EnumerateB,
        Task::Build,
        Task::Dilate,
        Task::Decompose,
        Task::Model,
        Task::Simulate,
    ] {
        let cfg = JobConfig {
            task: Some(task),
            fixture: Some("pauli-lueders".to_string()),
            seed: Some(11),
            shots: Some(20_000),
            ..Default::default()
        };
        let mut a = run(&cfg).unwrap();
        let mut b = run(&cfg).unwrap();
        a.timestamp = 0;
        b.timestamp = 0;
        assert_eq!(
            a.to_json_string(),
            b.to_json_string(),
            "task {} not reproducible",
            task.name()
        );
        assert!(a.passed, "task {}: {}", task.name(), a.to_json_string());
    }
}
