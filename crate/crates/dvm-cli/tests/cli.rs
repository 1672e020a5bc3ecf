//! End-to-end checks of the `dvm` binary: exit codes, output shapes, and
//! run-to-run determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dvm"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn run_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dvm"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary launches")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn vector_file(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).expect("write fixture");
    path
}

#[test]
fn scaled_multiply_of_ones_at_angle_zero_sums_the_entries() {
    let dir = tempfile::tempdir().unwrap();
    let input = vector_file(&dir, "ones.csv", "1,0\n1,0\n");
    let out = run(&[
        "multiply",
        "--size",
        "2",
        "--theta",
        "0",
        "--scaled",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out), "2,0\n2,0\n");
    // The all-ones node is degenerate, so the result is still written but
    // the process reports it through the exit code.
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("degenerate"), "stderr: {}", stderr(&out));
}

#[test]
fn raw_mode_accepts_a_degenerate_node_silently() {
    let dir = tempfile::tempdir().unwrap();
    let input = vector_file(&dir, "ones.csv", "1,0\n1,0\n");
    let out = run(&[
        "multiply",
        "--size",
        "2",
        "--theta",
        "0",
        "--scaled",
        "--raw",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "2,0\n2,0\n");
    assert!(stderr(&out).is_empty(), "stderr: {}", stderr(&out));
}

#[test]
fn degeneracy_interception_applies_at_large_sizes_too() {
    let checked = run(&[
        "multiply", "--size", "128", "--theta", "pi/32", "--random",
    ]);
    assert_eq!(code(&checked), 3);
    let raw = run(&[
        "multiply", "--size", "128", "--theta", "pi/32", "--random", "--raw",
    ]);
    assert_eq!(code(&raw), 0);
    assert_eq!(stdout(&checked), stdout(&raw));
}

#[test]
fn missing_input_file_is_an_io_failure() {
    let out = run(&[
        "multiply",
        "--size",
        "4",
        "--theta",
        "pi/4",
        "--input",
        "/no/such/vector.csv",
    ]);
    assert_eq!(code(&out), 4);
    assert!(stderr(&out).contains("/no/such/vector.csv"));
}

#[test]
fn malformed_vector_line_is_reported_with_its_number() {
    let dir = tempfile::tempdir().unwrap();
    let input = vector_file(&dir, "bad.csv", "1,0\nbogus\n");
    let out = run(&[
        "multiply",
        "--size",
        "2",
        "--theta",
        "pi/4",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("line 2"), "stderr: {err}");
    assert!(err.contains("bogus"), "stderr: {err}");
}

#[test]
fn blank_lines_in_vector_files_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let input = vector_file(&dir, "gaps.csv", "1,0\n\n0.5,-0.25\n");
    let out = run(&[
        "multiply",
        "--size",
        "2",
        "--theta",
        "pi/4",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 2);
}

#[test]
fn length_mismatch_between_vector_and_size_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = vector_file(&dir, "short.csv", "1,0\n1,0\n");
    let out = run(&[
        "multiply",
        "--size",
        "4",
        "--theta",
        "pi/4",
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("2 entries"), "stderr: {}", stderr(&out));
}

#[test]
fn node_selection_flags_are_mutually_exclusive() {
    let both = run(&[
        "multiply", "--size", "4", "--theta", "pi/4", "--alpha-re", "1", "--alpha-im", "0",
        "--random",
    ]);
    assert_eq!(code(&both), 2);
    let neither = run(&["multiply", "--size", "4", "--random"]);
    assert_eq!(code(&neither), 2);
    assert!(stderr(&neither).contains("--theta"));
}

#[test]
fn angle_grammar_accepts_pi_fractions_and_plain_radians() {
    // Size 2 keeps every angle below non-degenerate, including theta = pi.
    for theta in ["pi", "-pi/4", "0.5", "pi/32"] {
        let out = run(&["multiply", "--size", "2", "--theta", theta, "--random"]);
        assert_eq!(code(&out), 0, "theta {theta}: {}", stderr(&out));
    }
    let zero_denominator = run(&["multiply", "--size", "4", "--theta", "pi/0", "--random"]);
    assert_eq!(code(&zero_denominator), 2);
}

#[test]
fn explicit_node_values_are_accepted() {
    let out = run(&[
        "multiply", "--size", "4", "--alpha-re", "0", "--alpha-im", "-1", "--random",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn non_power_of_two_sizes_are_rejected() {
    let out = run(&["multiply", "--size", "3", "--theta", "pi/4", "--random"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn seeded_multiply_is_reproducible() {
    let args = ["multiply", "--size", "8", "--theta", "pi/32", "--random", "--seed", "7"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(stdout(&first), stdout(&second));

    let other_seed = run(&[
        "multiply", "--size", "8", "--theta", "pi/32", "--random", "--seed", "8",
    ]);
    assert_ne!(stdout(&first), stdout(&other_seed));
}

#[test]
fn multiply_json_wraps_rows_in_metadata() {
    let out = run(&[
        "multiply", "--size", "4", "--theta", "pi/4", "--random", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["meta"]["n"], 4);
    assert_eq!(doc["meta"]["algorithm"], "dvm");
    assert_eq!(doc["meta"]["degenerate"], false);
    let rows = doc["rows"].as_array().expect("rows array");
    assert_eq!(rows.len(), 4);
    assert!(rows[0]["re"].is_f64() || rows[0]["re"].is_i64());
}

#[test]
fn output_flag_writes_the_artifact_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("result.csv");
    let args_base = ["multiply", "--size", "8", "--theta", "pi/8", "--random", "--seed", "3"];
    let to_stdout = run(&args_base);
    let mut args = args_base.to_vec();
    args.extend(["--output", target.to_str().unwrap()]);
    let to_file = run(&args);
    assert_eq!(code(&to_file), 0);
    assert!(stdout(&to_file).is_empty());
    let written = std::fs::read_to_string(&target).expect("artifact written");
    assert_eq!(written, stdout(&to_stdout));
}

#[test]
fn complexity_rejects_sizes_outside_the_table_range() {
    for bad in ["6", "2"] {
        let out = run(&["complexity", "--variant", "scaled", "--max-size", bad]);
        assert_eq!(code(&out), 2, "max size {bad}");
    }
}

#[test]
fn error_table_emits_the_fixed_header_and_one_row_per_size() {
    let out = run(&["errors", "--max-size", "16", "--theta", "pi/32", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("N,err_sdvm_real,err_dvm_real,err_sdvm_complex,err_dvm_complex,degenerate")
    );
    let sizes: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(sizes, ["4", "8", "16"]);
}

#[test]
fn bound_refuses_degenerate_nodes_unless_raw() {
    let checked = run(&["bound", "--size", "128", "--theta", "pi/32", "--random"]);
    assert_eq!(code(&checked), 3);
    let raw = run(&["bound", "--size", "128", "--theta", "pi/32", "--random", "--raw"]);
    assert_eq!(code(&raw), 0);
    let value: f64 = stdout(&raw).trim().parse().expect("numeric bound");
    assert!(value.is_finite() && value >= 0.0);
}

#[test]
fn bound_json_reports_the_inputs_next_to_the_value() {
    let out = run(&[
        "bound", "--size", "8", "--theta", "pi/32", "--random", "--scaled", "--format", "json",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(doc["meta"]["n"], 8);
    assert_eq!(doc["meta"]["variant"], "scaled");
    assert_eq!(doc["meta"]["constant"], 1.0);
    assert!(doc["bound"].as_f64().expect("numeric bound") > 0.0);
}

#[test]
fn beamform_csv_lists_every_requested_bin() {
    let out = run(&[
        "beamform", "--antennas", "16", "--dft-size", "8", "--source-beam", "3", "--bins",
        "1,2,5",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("bin,beam,re,im,magnitude"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 * 16);
    for bin in ["1", "2", "5"] {
        let best = rows
            .iter()
            .filter(|r| r[0] == bin)
            .max_by(|a, b| {
                let ma: f64 = a[4].parse().unwrap();
                let mb: f64 = b[4].parse().unwrap();
                ma.total_cmp(&mb)
            })
            .expect("rows for bin");
        assert_eq!(best[1], "3", "argmax beam at bin {bin}");
        let magnitude: f64 = best[4].parse().unwrap();
        assert!(
            (magnitude - 16.0).abs() <= 1e-8,
            "bin {bin} peak magnitude {magnitude}"
        );
    }
}

#[test]
fn beamform_flags_the_zero_frequency_bin_and_still_succeeds() {
    let csv = run(&["beamform", "--source-beam", "3", "--bins", "0,1"]);
    assert_eq!(code(&csv), 0);
    assert!(stderr(&csv).contains("[0]"), "stderr: {}", stderr(&csv));

    let json = run(&[
        "beamform", "--source-beam", "3", "--bins", "0,1", "--format", "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).expect("valid json");
    assert_eq!(doc["meta"]["degenerate_bins"], serde_json::json!([0]));
}

#[test]
fn beamform_rejects_a_source_beam_outside_the_array() {
    let out = run(&["beamform", "--source-beam", "0", "--bins", "1"]);
    assert_eq!(code(&out), 2);
    let too_high = run(&["beamform", "--antennas", "8", "--source-beam", "9", "--bins", "1"]);
    assert_eq!(code(&too_high), 2);
}

#[test]
fn worker_cap_does_not_change_beamform_output() {
    let args = [
        "beamform", "--antennas", "32", "--dft-size", "8", "--source-beam", "5", "--bins",
        "1,2,3,4,5,6,7", "--noise", "0.05", "--seed", "11",
    ];
    let single = run_with_env(&args, "DVM_THREADS", "1");
    let several = run_with_env(&args, "DVM_THREADS", "4");
    assert_eq!(code(&single), 0);
    assert_eq!(stdout(&single), stdout(&several));
}
