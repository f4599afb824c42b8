//! Process-level contract of the binary: exit codes and byte-stable stdout.

use std::process::Command;

fn qpdkit(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qpdkit"))
        .args(args)
        .env_remove("QPDKIT_SEED")
        .output()
        .expect("binary runs")
}

#[test]
fn success_is_zero() {
    let out = qpdkit(&["qpd-sweep", "--phi-points", "51"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!out.stdout.is_empty());
}

#[test]
fn usage_errors_are_one() {
    assert_eq!(qpdkit(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(
        qpdkit(&["qpd-sweep", "--lambda", "nan?"]).status.code(),
        Some(1)
    );
    assert_eq!(
        qpdkit(&["search", "--graph", "cycle:2", "--marked", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        qpdkit(&["search", "--graph", "/does/not/exist", "--marked", "0"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn bound_violation_is_two() {
    let out = qpdkit(&["qpd-sweep", "--phi-points", "51", "--tol", "1e-18"]);
    assert_eq!(out.status.code(), Some(2));
    // The table is still emitted so the violation can be inspected.
    assert!(String::from_utf8_lossy(&out.stdout).contains("violation\":true"));
}

#[test]
fn help_is_zero() {
    assert_eq!(qpdkit(&["--help"]).status.code(), Some(0));
    assert_eq!(qpdkit(&["search", "--help"]).status.code(), Some(0));
}

#[test]
fn stdout_reruns_are_byte_identical() {
    let args = [
        "search",
        "--graph",
        "gnp:12:0.4:3",
        "--marked",
        "0",
        "--mode",
        "sample",
        "--seed",
        "11",
    ];
    let a = qpdkit(&args);
    let b = qpdkit(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn env_seed_fallback_applies() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_qpdkit"))
        .args([
            "search", "--graph", "cycle:8", "--marked", "0", "--mode", "sample",
        ])
        .env("QPDKIT_SEED", "123")
        .output()
        .unwrap();
    let with_flag = qpdkit(&[
        "search", "--graph", "cycle:8", "--marked", "0", "--mode", "sample", "--seed", "123",
    ]);
    assert_eq!(with_env.stdout, with_flag.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("qpdkit_exit_codes");
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("sweep.csv");
    let out = qpdkit(&[
        "qpd-sweep",
        "--phi-points",
        "11",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&file).unwrap();
    assert!(written.starts_with("# {"));
    assert_eq!(written.lines().count(), 14); // config + header + 11 rows + summary
}
