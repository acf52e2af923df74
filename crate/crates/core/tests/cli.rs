//! End-to-end tests of the command-line binary: exit codes, output files,
//! manifests, and bit-for-bit reproducibility of repeated runs.

use std::path::Path;
use std::process::{Command, Output};

use pathlab::io::sha256_file;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pathlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should launch")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--help"]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(
        run(&["center", "--family", "box", "--mu", "banana"]).status.code(),
        Some(1)
    );
    // --instance and --family are mutually exclusive
    assert_eq!(
        run(&["center", "--instance", "x.json", "--family", "box", "--mu", "1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn runtime_errors_exit_two() {
    // nonexistent instance file
    let out = run(&["center", "--instance", "/nonexistent/lp.json", "--mu", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty(), "error should be reported on stderr");

    // invalid family parameter caught at generation time
    assert_eq!(
        run(&["lw-gen", "--r", "0", "--t", "4", "--out", "/tmp/never.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn a_failed_audit_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("lw.json");
    assert_eq!(
        run(&["lw-gen", "--r", "2", "--t", "4", "--out", good.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );

    // Corrupt the recorded optimum: every reported gap is then off by 10,
    // which must break the gap sandwich.
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&good).unwrap()).unwrap();
    doc["optimal_value"] = serde_json::json!(-10.0);
    let bad = dir.path().join("tampered.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();

    let out = run(&["verify", "thm2", "--instance", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout_of(&out);
    assert!(text.contains("FAIL"), "stdout should flag the failed checks");
}

#[test]
fn verify_prints_one_line_per_check_and_a_total() {
    let out = run(&["verify", "lemma3", "--r", "2", "--t", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let pass_lines = text.lines().filter(|l| l.starts_with("PASS")).count();
    assert!(pass_lines >= 2, "expected at least two PASS lines:\n{text}");
    assert!(!text.contains("\nFAIL"), "no check should fail:\n{text}");
    assert!(
        text.lines().any(|l| l.starts_with("total: ")),
        "expected a summary line:\n{text}"
    );
}

#[test]
fn verify_json_report_is_machine_readable() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = run(&[
        "verify",
        "sc",
        "--family",
        "square",
        "--draws",
        "25",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let reports = doc.as_array().expect("top level is an array of reports");
    assert!(!reports.is_empty());
    let checks = reports[0]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for check in checks {
        assert!(check["satisfied"].as_bool().unwrap());
        assert!(check["paper_anchor"].is_string());
        assert!(check["lhs"].is_number());
        assert!(check["rhs"].is_number());
    }
}

#[test]
fn generation_is_bit_for_bit_reproducible_and_manifested() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        assert_eq!(
            run(&["lw-gen", "--r", "3", "--t", "10", "--out", path.to_str().unwrap()])
                .status
                .code(),
            Some(0)
        );
    }
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "same command must produce identical bytes"
    );

    let manifest_path = dir.path().join("a.json.manifest.json");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
    let argv = manifest["command_line"].as_array().unwrap();
    assert!(argv.iter().any(|v| v.as_str() == Some("lw-gen")));
    assert_eq!(manifest["seed"].as_u64(), Some(20240901));
    let outputs = manifest["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 1);
    let recorded = outputs[0]["sha256"].as_str().unwrap();
    assert_eq!(recorded, sha256_file(&a).unwrap(), "manifest digest matches file");
}

#[test]
fn shortstep_runs_are_reproducible_across_invocations() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("run_a.csv");
    let b = dir.path().join("run_b.csv");
    for path in [&a, &b] {
        let out = run(&[
            "shortstep",
            "--family",
            "lw",
            "--r",
            "2",
            "--t",
            "10",
            "--gap-target",
            "1e-3",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let header = std::fs::read_to_string(&a).unwrap();
    let first = header.lines().next().unwrap();
    assert!(first.starts_with("k,mu,lambda,gap,x_1"));
}

#[test]
fn center_reports_the_box_midpoint_formula() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("center.json");
    let out = run(&[
        "center",
        "--family",
        "box",
        "--mu",
        "1",
        "--out-json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let x0 = doc["x"][0].as_f64().unwrap();
    let expected = (3.0 - 5.0_f64.sqrt()) / 2.0;
    assert!(
        (x0 - expected).abs() < 1e-9,
        "x0 = {x0}, closed form = {expected}"
    );
}

#[test]
fn solve_writes_a_manifest_next_to_its_output() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("solution.json");
    let out = run(&[
        "solve",
        "--family",
        "lw",
        "--r",
        "2",
        "--t",
        "4",
        "--tol",
        "1e-6",
        "--out-json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(Path::new(&json).exists());
    assert!(dir.path().join("solution.json.manifest.json").exists());

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(doc["value"].as_f64().unwrap().abs() < 1e-6);
}

#[test]
fn trace_csv_has_a_row_per_grid_point() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let out = run(&[
        "trace",
        "--family",
        "box",
        "--mu-hi",
        "8",
        "--mu-lo",
        "1",
        "--shrink",
        "0.5",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    // grid 8, 4, 2, 1 plus the header
    assert_eq!(text.lines().count(), 5, "{text}");
    assert!(text.lines().next().unwrap().starts_with("mu,x_1"));
}
