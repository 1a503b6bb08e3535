//! End-to-end runs of the `brickdist` binary: output schemas, determinism,
//! config merging, exit codes, and cross-command consistency.

use std::path::PathBuf;
use std::process::{Command, Output};

fn brickdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brickdist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = brickdist(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

/// Data rows of a CSV payload as string fields, header block and column row
/// stripped.
fn csv_rows(payload: &str) -> Vec<Vec<String>> {
    payload
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("brickdist-cli-{}-{name}", std::process::id()))
}

#[test]
fn identical_runs_are_byte_identical_and_seeds_matter() {
    let args = [
        "mc-validate",
        "--two-l",
        "6",
        "--x",
        "3",
        "--t",
        "1",
        "--n",
        "1000",
        "--seed",
        "11",
    ];
    let first = stdout_of(&args);
    let second = stdout_of(&args);
    assert_eq!(first, second, "same configuration must reproduce byte-identical output");
    let mut reseeded_args = args;
    reseeded_args[10] = "12";
    let reseeded = stdout_of(&reseeded_args);
    assert_ne!(first, reseeded, "a different seed must change the estimates");
}

#[test]
fn undissipated_chain_matches_the_exact_sweep() {
    let markov = stdout_of(&[
        "markov",
        "--two-l",
        "12",
        "--x",
        "3",
        "--profile",
        "pair:beta=0.7",
        "--a",
        "0",
        "--depth",
        "30",
        "--precision",
        "17",
    ]);
    let exact = stdout_of(&[
        "exact-sweep",
        "--two-l",
        "12",
        "--x",
        "3",
        "--profile",
        "pair:beta=0.7",
        "--t",
        "30",
        "--precision",
        "17",
    ]);
    let markov_rows = csv_rows(&markov);
    let exact_rows = csv_rows(&exact);
    assert_eq!(markov_rows.len(), 1);
    assert_eq!(exact_rows.len(), 1);
    let chain: f64 = markov_rows[0][1].parse().unwrap();
    let walk: f64 = exact_rows[0][1].parse().unwrap();
    assert!(
        (chain - walk).abs() <= 1e-12,
        "a = 0 chain value {chain} differs from the exact sweep {walk}"
    );
}

#[test]
fn json_output_is_valid_and_schema_complete() {
    let payload = stdout_of(&[
        "infinite-time",
        "--two-l",
        "12",
        "--x",
        "0..12..3",
        "--profile",
        "w:omega=0.5",
        "--format",
        "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&payload).expect("valid json");
    let obj = doc.as_object().expect("top-level object");
    for key in ["version", "command", "config", "columns", "rows"] {
        assert!(obj.contains_key(key), "missing key '{key}'");
    }
    assert_eq!(obj["command"], "infinite-time");
    let columns = obj["columns"].as_array().unwrap();
    assert_eq!(columns.len(), 3);
    let rows = obj["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert_eq!(row.as_array().unwrap().len(), columns.len());
    }
    assert_eq!(rows[0].as_array().unwrap()[2], "closed-form");
}

#[test]
fn half_cut_stationary_value_is_exact() {
    let payload = stdout_of(&[
        "infinite-time",
        "--two-l",
        "12",
        "--x",
        "6",
        "--profile",
        "w:omega=0.5",
    ]);
    let rows = csv_rows(&payload);
    assert_eq!(rows.len(), 1);
    // half cut: (1 - omega) / (q^0 + 1) = 0.25, at the default 12 digits
    assert_eq!(rows[0][1], "0.250000000000");
}

#[test]
fn config_file_fills_gaps_and_flags_win() {
    let path = temp_path("merge.cfg");
    std::fs::write(&path, "two-l = 8\nx = 3\nprofile = pair:beta=0.7\nt = 0..2\n").unwrap();
    let from_file = stdout_of(&["exact-sweep", "--config", path.to_str().unwrap()]);
    assert!(from_file.contains("# two-l = 8"));
    assert_eq!(csv_rows(&from_file).len(), 3);
    let overridden = stdout_of(&[
        "exact-sweep",
        "--config",
        path.to_str().unwrap(),
        "--two-l",
        "12",
    ]);
    assert!(overridden.contains("# two-l = 12"), "explicit flag must beat the file");
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn unknown_config_key_is_a_usage_error() {
    let path = temp_path("unknown.cfg");
    std::fs::write(&path, "two-l = 8\nchain-length = 8\n").unwrap();
    let out = brickdist(&["exact-sweep", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("chain-length"));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn missing_required_parameter_exits_2() {
    let out = brickdist(&["exact-sweep", "--x", "3", "--profile", "pair:beta=0.7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("two-l"));
}

#[test]
fn state_vector_cap_exits_3() {
    let out = brickdist(&["mc-validate", "--two-l", "26", "--n", "1000"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size guard"));
}

#[test]
fn figure_presets_reject_parameter_overrides() {
    let out = brickdist(&["figure", "1", "--two-l", "50"]);
    assert_eq!(out.status.code(), Some(2));
    let out = brickdist(&["figure", "4", "--profile", "w:omega=0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let out = brickdist(&["figure", "5"]);
    assert_eq!(out.status.code(), Some(2), "preset index is 1..=4");
}

#[test]
fn figure_4_sweeps_three_cuts_with_critical_amplitudes() {
    let payload = stdout_of(&["figure", "4"]);
    let rows = csv_rows(&payload);
    assert_eq!(rows.len(), 3 * 101);
    let a_c: f64 = rows[0][3].parse().unwrap();
    assert!(
        (a_c - 2.0 / 3.0 * (2.0f64).ln()).abs() < 1e-12,
        "x = 75 critical amplitude should be (2/3) ln 2, got {a_c}"
    );
    // distance collapses once the damping exceeds the critical amplitude
    let last: f64 = rows[100][2].parse().unwrap();
    assert!(last < 1e-6, "x = 75 at a = 2 should have lost its memory, got {last}");
    assert_eq!(rows[0][4], "closed-form");
}

#[test]
fn precision_flag_controls_rendered_digits() {
    let coarse = stdout_of(&[
        "infinite-time",
        "--two-l",
        "12",
        "--x",
        "6",
        "--profile",
        "w:omega=0.5",
        "--precision",
        "3",
    ]);
    assert_eq!(csv_rows(&coarse)[0][1], "0.250");
}

#[test]
fn out_flag_writes_the_same_payload_to_a_file() {
    let path = temp_path("out.csv");
    let direct = stdout_of(&[
        "exact-sweep",
        "--two-l",
        "8",
        "--x",
        "3",
        "--profile",
        "pair:beta=0.7",
        "--t",
        "0..2",
    ]);
    let out = brickdist(&[
        "exact-sweep",
        "--two-l",
        "8",
        "--x",
        "3",
        "--profile",
        "pair:beta=0.7",
        "--t",
        "0..2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty(), "--out must not also print to stdout");
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, direct);
    assert!(written.starts_with("# brickdist "));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn mc_validate_reports_grid_and_ensemble_checks() {
    let payload = stdout_of(&[
        "mc-validate",
        "--two-l",
        "6",
        "--x",
        "1..3..2",
        "--t",
        "0..1",
        "--n",
        "1000",
        "--seed",
        "7",
    ]);
    let rows = csv_rows(&payload);
    // 2 profiles x 2 cuts x 2 depths, plus the two ensemble rows
    assert_eq!(rows.len(), 2 * 2 * 2 + 2);
    let grid_rows = rows.iter().filter(|r| r[0] == "grid").count();
    assert_eq!(grid_rows, 8);
    for row in rows.iter().filter(|r| r[0] == "grid") {
        let z: f64 = row[8].parse().unwrap();
        assert!(z.abs() < 6.0, "grid cell {row:?} sits {z} standard errors out");
        assert_eq!(row[9], "mc");
    }
    let folded = rows.iter().find(|r| r[0] == "folded-gate").expect("folded row");
    let folded_value: f64 = folded[5].parse().unwrap();
    assert!(folded_value < 5.0 / (1000.0f64).sqrt());
    let moment = rows.iter().find(|r| r[0] == "haar-moment").expect("moment row");
    assert_eq!(moment[7], "0.250000000000");
    let z: f64 = moment[8].parse().unwrap();
    assert!(z.abs() < 6.0);
}

#[test]
fn depth_zero_row_uses_the_initial_overlap() {
    let payload = stdout_of(&[
        "exact-sweep",
        "--two-l",
        "8",
        "--x",
        "3",
        "--profile",
        "pair:beta=0.7",
        "--t",
        "0",
    ]);
    let rows = csv_rows(&payload);
    let value: f64 = rows[0][1].parse().unwrap();
    // 1 - 2 g(x) / (1 + 1) with g(x) = 0.7^3
    assert!((value - (1.0 - 0.7f64.powi(3))).abs() < 1e-12);
    assert_eq!(rows[0][2], "exact");
}

#[test]
fn mixed_profile_is_stationary_only() {
    // cross is an absolute purity; s, sp are exponents: tr(rho^2) = q^(-2L s)
    let out = brickdist(&[
        "exact-sweep",
        "--two-l",
        "8",
        "--x",
        "3",
        "--profile",
        "mixed:cross=0.005,s=0.9,sp=0.9",
        "--t",
        "0..2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let payload = stdout_of(&[
        "infinite-time",
        "--two-l",
        "8",
        "--x",
        "4",
        "--profile",
        "mixed:cross=0.005,s=0.9,sp=0.9",
    ]);
    let rows = csv_rows(&payload);
    assert_eq!(rows.len(), 1);
    let value: f64 = rows[0][1].parse().unwrap();
    assert!((0.0..=1.0).contains(&value));
}
