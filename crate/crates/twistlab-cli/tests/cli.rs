//! End-to-end checks of the command-line front-end: exit codes, report
//! determinism, and the documented example configurations.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_twistlab")
}

fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn twisted_odd_rows_reports_fourfold_degeneracy() {
    let cfg = config_dir().join("h_alpha_2x3.toml");
    let tmp = std::env::temp_dir().join("twistlab_test_halpha.json");
    let (code, stdout, stderr) = run(&[
        "run",
        cfg.to_str().unwrap(),
        "--report",
        tmp.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "stdout: {stdout}\nstderr: {stderr}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&tmp).unwrap()).unwrap();
    assert_eq!(report["analyses"]["gsd"]["detail"]["gsd"], 4);
    assert_eq!(report["passed"], true);
}

#[test]
fn untwisted_reference_reports_sixteen() {
    let cfg = config_dir().join("untwisted_3x3.toml");
    let (code, stdout, _) = run(&["gsd", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"gsd\": 16"), "{stdout}");
}

#[test]
fn doubly_twisted_odd_torus() {
    let cfg = config_dir().join("h_alpha_alpha_3x3.toml");
    let (code, stdout, _) = run(&["run", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"gsd\": 4"), "{stdout}");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let cfg = config_dir().join("h_alpha_beta_2x4.toml");
    let t1 = std::env::temp_dir().join("twistlab_det_1.json");
    let t2 = std::env::temp_dir().join("twistlab_det_2.json");
    let (c1, ..) = run(&["run", cfg.to_str().unwrap(), "--report", t1.to_str().unwrap()]);
    let (c2, ..) = run(&["run", cfg.to_str().unwrap(), "--report", t2.to_str().unwrap()]);
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    assert_eq!(
        std::fs::read(&t1).unwrap(),
        std::fs::read(&t2).unwrap(),
        "identical configs must produce byte-identical reports"
    );
}

#[test]
fn focused_subcommands_work() {
    let cfg = config_dir().join("h_alpha_2x3.toml");
    for sub in ["check-commute", "syndrome", "oracles"] {
        let (code, stdout, stderr) = run(&[sub, cfg.to_str().unwrap()]);
        assert_eq!(code, 0, "{sub}: {stdout} {stderr}");
        assert!(stdout.contains("PASS"), "{sub}: {stdout}");
    }
    let cfg = config_dir().join("boundary_rough_full.toml");
    let (code, stdout, _) = run(&["boundaries", cfg.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("condensation"));
}

#[test]
fn bad_inputs_use_distinct_exit_codes() {
    let (code, _, stderr) = run(&["run", "/nonexistent/nope.toml"]);
    assert_eq!(code, 1, "{stderr}");
    let (code, _, stderr) = run(&["frobnicate"]);
    assert_eq!(code, 1, "{stderr}");
    let (code, ..) = run(&[]);
    assert_eq!(code, 1);
}

#[test]
fn group_show_prints_the_tables() {
    let (code, stdout, _) = run(&["group-show", "--factors", "2,2", "--cocycle", "canonical_z22"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("cocycle table"));
    assert!(stdout.contains("1/4"), "fourth roots appear: {stdout}");
    assert!(stdout.contains("slant kernel order 1"));
}

#[test]
fn render_writes_svg_slices() {
    let cfg = config_dir().join("h_alpha_2x3.toml");
    let dir = std::env::temp_dir().join("twistlab_svg_test");
    let _ = std::fs::remove_dir_all(&dir);
    let (code, stdout, stderr) = run(&[
        "render",
        cfg.to_str().unwrap(),
        "--svg-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout} {stderr}");
    let lattice = std::fs::read_to_string(dir.join("slice_z0.svg")).unwrap();
    assert!(lattice.starts_with("<svg"));
    let with_syndrome = std::fs::read_to_string(dir.join("syndrome_slice_z0.svg")).unwrap();
    assert!(with_syndrome.contains("dot"), "syndrome dots rendered");
}

#[test]
fn budget_flags_reach_the_oracles() {
    let cfg = config_dir().join("h_alpha_2x3.toml");
    let (code, stdout, _) = run(&[
        "oracles",
        cfg.to_str().unwrap(),
        "--trace-budget",
        "1",
        "--dense-budget",
        "1",
    ]);
    // with both oracles skipped, agreement checks pass vacuously
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("skipped"), "{stdout}");
}
