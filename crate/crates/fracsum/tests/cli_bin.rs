//! End-to-end checks of the installed binary: exit codes, file emission,
//! and environment overrides.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracsum"))
}

#[test]
fn compute_to_file_exits_zero() {
    let dir = std::env::temp_dir().join("fracsum_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("compute.csv");
    let status = bin()
        .args([
            "compute", "--f", "one", "--x", "10", "--dcut", "10",
            "--out", out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("x,tf_exact,main_term,error_term,envelope\n"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn usage_error_exits_two() {
    let status = bin()
        .args(["constants", "--f", "no_such_function", "--dcut", "10"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn capacity_error_exits_three() {
    // A tiny memory cap forces the capacity path.
    let status = bin()
        .env("FRACSUM_MEMORY_CAP", "100")
        .args(["prop-check", "--xmax", "1000"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn star_cutoff_override_flags_proxy_norms() {
    // With the exact cutoff forced to 1, every sweep norm becomes a proxy.
    let output = bin()
        .env("FRACSUM_STAR_CUTOFF", "1")
        .args(["rs-check", "--format", "csv"])
        .output()
        .unwrap();
    let text = String::from_utf8(output.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.ends_with("exact_norm"));
    assert!(lines.all(|l| l.ends_with(",false")));
}

#[test]
fn vaaler_check_passes_and_exits_zero() {
    let output = bin()
        .args(["vaaler-check", "--seed", "3", "--samples", "500"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let verdict = String::from_utf8(output.stderr).unwrap();
    assert!(verdict.contains("PASS"), "{verdict}");
}
