//! Smoke tests for the command-line surface: exit codes and output shape.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fingerspec"))
        .current_dir(workspace_root())
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn missing_input_exits_with_one() {
    let out = run(&[
        "size-motor",
        "--spec",
        "data/specs/does_not_exist.toml",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn size_motor_prints_torque() {
    let out = run(&["size-motor", "--spec", "data/specs/motor_small.toml"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("motor_torque_Nm,1.005"), "stdout: {stdout}");
}

#[test]
fn gear_strength_prints_value() {
    let out = run(&["gear-strength", "--spec", "data/specs/gear_example.toml"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("gear_strength_Nm,0.272"), "stdout: {stdout}");
}

#[test]
fn sea_range_reports_window() {
    let out = run(&[
        "sea-range",
        "--motor",
        "data/specs/motor_small.toml",
        "--sea",
        "data/specs/sea_example.toml",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("k_min_Nm_per_rad,0.0063999"), "stdout: {stdout}");
    assert!(stdout.contains("k_max_Nm_per_rad,156.25"), "stdout: {stdout}");
    assert!(stdout.contains("feasible,true"), "stdout: {stdout}");
}

#[test]
fn report_compares_against_profile() {
    let out = run(&[
        "report",
        "--profile",
        "data/profiles/everyday.toml",
        "--achieved",
        "data/profiles/achieved_example.toml",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("11 of 13 requirements met"), "stdout: {stdout}");
}

#[test]
fn mostly_infeasible_task_exits_with_two() {
    // a grasp whose contact normals are collinear cannot resist a pull away
    // from the contacts, so every timestep of this task is infeasible
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("library.toml"),
        r#"
[[grasp]]
name = "Tripod1"
contacts = [
    { z = -0.020, theta = 1.5708, pressure_radius = 0.008 },
    { z = 0.000, theta = 1.5708, pressure_radius = 0.008 },
    { z = 0.020, theta = 1.5708, pressure_radius = 0.008 },
]
"#,
    )
    .unwrap();
    let mut csv = String::from("t,Fx,Fy,Fz,Tx,Ty,Tz\n");
    for k in 0..5 {
        csv.push_str(&format!("{},0,-2,0,0,0,0\n", k as f64 * 0.01));
    }
    std::fs::write(dir.path().join("pull.csv"), csv).unwrap();
    std::fs::write(
        dir.path().join("task.toml"),
        r#"
[[task]]
name = "pull"
handle_size = "medium"
grasp = "Tripod1"
palm = false
trajectory = "pull.csv"
"#,
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_fingerspec"))
        .current_dir(dir.path())
        .args([
            "optimize-task",
            "--task",
            "task.toml",
            "--grasp-library",
            "library.toml",
            "--output-dir",
            "out",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}
