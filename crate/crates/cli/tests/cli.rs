//! Integration tests against the compiled binary: exit codes, stream
//! separation (report on stdout, diagnostics on stderr), and the
//! generate -> fit -> plot pipeline end to end.

use std::path::Path;
use std::process::{Command, Output};

fn erm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_erm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

#[test]
fn no_arguments_is_a_usage_error() {
    let out = erm(&[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("usage"));
    assert!(stdout(&out).is_empty());
}

#[test]
fn unknown_flags_exit_2_with_an_explanation() {
    let out = erm(&["gen-data", "--frobnicate", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--frobnicate"));
}

#[test]
fn closed_solver_on_a_non_squared_loss_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let gen = erm(&[
        "gen-data", "--model", "awgn", "--true-w", "1", "--m", "5", "--sigma", "0",
        "--seed", "1", "--out", data.to_str().unwrap(),
    ]);
    assert_eq!(gen.status.code(), Some(0));
    let out = erm(&[
        "fit", "--data", data.to_str().unwrap(), "--family", "linear", "--loss", "logistic",
        "--solver", "closed", "--out", dir.path().join("m.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("closed"));
}

#[test]
fn missing_input_file_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = erm(&[
        "fit", "--data", "/no/such/file.csv", "--family", "linear", "--loss", "squared",
        "--out", dir.path().join("m.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("file not found"));
}

#[test]
fn rank_deficient_features_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("dup.csv");
    std::fs::write(&data, "x1,x2,y\n1,1,1\n2,2,2\n3,3,3\n").unwrap();
    let out = erm(&[
        "fit", "--data", data.to_str().unwrap(), "--family", "linear", "--loss", "squared",
        "--solver", "closed", "--out", dir.path().join("m.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("singular"));
}

#[test]
fn generate_fit_plot_pipeline_runs_clean() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    let model = dir.path().join("model.txt");
    let svg = dir.path().join("plot.svg");

    let gen = erm(&[
        "gen-data", "--model", "awgn", "--true-w", "15", "--m", "20", "--sigma", "1",
        "--seed", "7", "--out", data.to_str().unwrap(),
    ]);
    assert_eq!(gen.status.code(), Some(0));
    assert!(stdout(&gen).starts_with("model=awgn"));

    let fit = erm(&[
        "fit", "--data", data.to_str().unwrap(), "--family", "linear", "--loss", "squared",
        "--out", model.to_str().unwrap(),
    ]);
    assert_eq!(fit.status.code(), Some(0));
    let line = stdout(&fit);
    for key in ["risk=", "w=", "iters=", "converged="] {
        assert!(line.contains(key), "fit line missing {key}: {line}");
    }

    let plot_csv = format!("{}.plot.csv", model.display());
    assert!(Path::new(&plot_csv).exists());
    let plot = erm(&["plot-svg", "--csv", &plot_csv, "--out", svg.to_str().unwrap()]);
    assert_eq!(plot.status.code(), Some(0));
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(svg_text.matches("<circle").count(), 20);
    assert_eq!(svg_text.matches("<polyline").count(), 1);
}

#[test]
fn ann_fit_writes_a_reloadable_model() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    erm(&[
        "gen-data", "--model", "awgn", "--true-w", "2", "--m", "30", "--sigma", "0.5",
        "--seed", "3", "--out", data.to_str().unwrap(),
    ]);
    let model = dir.path().join("ann.txt");
    let fit = erm(&[
        "fit", "--data", data.to_str().unwrap(), "--family", "ann", "--loss", "squared",
        "--solver", "gd", "--step", "0.05", "--iters", "300", "--seed", "1", "--out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(fit.status.code(), Some(0), "stderr: {}", stderr(&fit));
    let text = std::fs::read_to_string(&model).unwrap();
    assert!(text.starts_with("format=1\nfamily=ann\n"));
    let reloaded = erm_core::Hypothesis::load(&model).unwrap();
    assert!(matches!(reloaded, erm_core::Hypothesis::Ann(_)));
}

#[test]
fn identity_corruption_reports_zero_deviation_and_exits_1() {
    // Seed 7's leftmost point keeps its own label, so neither fit moves,
    // the ratio is undefined, and the command reports failure.
    let dir = tempfile::tempdir().unwrap();
    let out = erm(&[
        "robustness", "--seed", "7", "--outlier-label", "-12.637694601080012",
        "--outdir", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout(&out);
    assert!(report.contains("deviation_sq=0\n"), "report: {report}");
    assert!(report.contains("deviation_huber=0\n"), "report: {report}");
}

#[test]
fn robustness_report_is_parseable_key_value_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = erm(&["robustness", "--outdir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout(&out);
    let mut ratio = None;
    for line in report.lines() {
        let (key, value) = line.split_once('=').expect("key=value line");
        assert!(!key.is_empty() && !value.is_empty());
        if key == "robustness_ratio" {
            ratio = Some(value.parse::<f64>().unwrap());
        }
    }
    assert!(ratio.unwrap() > 1.0);
}
