//! Subcommand implementations and dispatch.
//!
//! Exit code contract: 0 on success (for `robustness`, additionally only
//! when the robustness ratio exceeds 1), 1 for runtime or numeric failures,
//! 2 for usage errors.

use std::io::Write;
use std::path::PathBuf;

use erm_core::{
    empirical_risk, generate_awgn_dataset, generate_logistic_dataset, gradient_descent_fit,
    least_squares_closed_form, load_csv, save_csv, save_plot_csv, Activation, Dataset,
    FeatureSampler, FeatureVector, FitFamily, GdConfig, Hypothesis, LossKind,
};

use crate::experiment::{run_robustness, RobustnessParams};
use crate::flags::Flags;
use crate::svg::emit_svg;

/// Failures split by exit code: usage errors exit 2, runtime errors exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<erm_core::Error> for CliError {
    fn from(e: erm_core::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub fn usage() -> &'static str {
    "usage: erm <command> [flags]\n\
     \n\
     commands:\n\
     \x20 gen-data    --model awgn|logistic --true-w <floats> --m <count>\n\
     \x20             [--sigma <float>] --seed <int> --out <path>\n\
     \x20 fit         --data <path> --family linear|ann --loss squared|logistic|huber\n\
     \x20             [--huber-c <float>] [--solver closed|gd] [--step <float>]\n\
     \x20             [--iters <count>] [--seed <int>] [--activation <name>] --out <path>\n\
     \x20 robustness  [--m <count>] [--true-w <float>] [--sigma <float>] [--seed <int>]\n\
     \x20             [--outlier-label <float>] [--huber-c <float>] --outdir <path>\n\
     \x20 plot-svg    --csv <path> --out <path>\n"
}

/// Parses and runs one invocation, returning the process exit code.
pub fn run(args: &[String], out: &mut dyn Write) -> Result<u8, CliError> {
    let Some(command) = args.first() else {
        return Err(CliError::Usage("no command given".into()));
    };
    let rest = &args[1..];
    match command.as_str() {
        "gen-data" => cmd_gen_data(rest, out),
        "fit" => cmd_fit(rest, out),
        "robustness" => cmd_robustness(rest, out),
        "plot-svg" => cmd_plot_svg(rest, out),
        other => Err(CliError::Usage(format!("unknown command {other:?}"))),
    }
}

fn parse_weights(raw: &str) -> Result<FeatureVector, CliError> {
    let values: Result<Vec<f64>, _> = raw.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let values = values.map_err(|_| CliError::Usage(format!("bad value {raw:?} for --true-w")))?;
    FeatureVector::new(values)
        .map_err(|_| CliError::Usage("--true-w needs at least one finite value".into()))
}

fn write_line(out: &mut dyn Write, line: &str) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|e| CliError::Runtime(format!("stdout write failed: {e}")))
}

fn cmd_gen_data(args: &[String], out: &mut dyn Write) -> Result<u8, CliError> {
    let flags = Flags::parse(args, &["model", "true-w", "m", "sigma", "seed", "out"])
        .map_err(CliError::Usage)?;
    let model = flags.require("model").map_err(CliError::Usage)?.to_string();
    let true_w = parse_weights(flags.require("true-w").map_err(CliError::Usage)?)?;
    let m: usize = flags.require_parsed("m").map_err(CliError::Usage)?;
    let seed: u64 = flags.require_parsed("seed").map_err(CliError::Usage)?;
    let out_path: PathBuf = flags.require("out").map_err(CliError::Usage)?.into();
    let sigma: f64 = flags.parsed_or("sigma", 1.0).map_err(CliError::Usage)?;

    let sampler = FeatureSampler::default();
    let record = match model.as_str() {
        "awgn" => {
            let dataset = generate_awgn_dataset(&true_w, m, sampler, sigma, seed)?;
            save_csv(&out_path, &dataset)?;
            format!(
                "model=awgn true_w={} m={m} sigma={sigma} seed={seed} out={}",
                join(true_w.as_slice()),
                out_path.display()
            )
        }
        "logistic" => {
            let dataset = generate_logistic_dataset(&true_w, m, sampler, seed)?;
            save_csv(&out_path, &dataset)?;
            format!(
                "model=logistic true_w={} m={m} seed={seed} out={}",
                join(true_w.as_slice()),
                out_path.display()
            )
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown model {other:?}; expected awgn or logistic"
            )))
        }
    };
    write_line(out, &record)?;
    Ok(0)
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn fitted_weights(h: &Hypothesis) -> Vec<f64> {
    match h {
        Hypothesis::Linear(l) => l.weights().as_slice().to_vec(),
        Hypothesis::Ann(a) => a.weights().to_vec(),
        Hypothesis::Tree(_) => Vec::new(),
    }
}

fn cmd_fit(args: &[String], out: &mut dyn Write) -> Result<u8, CliError> {
    let flags = Flags::parse(
        args,
        &[
            "data",
            "family",
            "loss",
            "huber-c",
            "solver",
            "step",
            "iters",
            "seed",
            "activation",
            "out",
        ],
    )
    .map_err(CliError::Usage)?;

    let data_path = flags.require("data").map_err(CliError::Usage)?.to_string();
    let family_name = flags.require("family").map_err(CliError::Usage)?.to_string();
    let loss_name = flags.require("loss").map_err(CliError::Usage)?.to_string();
    let out_path: PathBuf = flags.require("out").map_err(CliError::Usage)?.into();
    let huber_c: f64 = flags
        .parsed_or("huber-c", LossKind::DEFAULT_HUBER_C)
        .map_err(CliError::Usage)?;

    let kind = match loss_name.as_str() {
        "squared" => LossKind::SquaredError,
        "logistic" => LossKind::Logistic,
        "huber" => LossKind::huber(huber_c)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown loss {other:?}; expected squared, logistic or huber"
            )))
        }
    };
    let solver = flags
        .get("solver")
        .map(str::to_string)
        .unwrap_or_else(|| {
            if family_name == "linear" && kind == LossKind::SquaredError {
                "closed".to_string()
            } else {
                "gd".to_string()
            }
        });
    if solver == "closed" && (family_name != "linear" || kind != LossKind::SquaredError) {
        return Err(CliError::Usage(
            "--solver closed only applies to --family linear with --loss squared; \
             use --solver gd for every other combination"
                .into(),
        ));
    }

    let dataset = load_csv(&data_path, kind.required_label_space())?;

    let family = match family_name.as_str() {
        "linear" => FitFamily::Linear,
        "ann" => {
            let activation: Activation = flags
                .get("activation")
                .unwrap_or("sigmoid")
                .parse()
                .map_err(|_| CliError::Usage("unknown activation".into()))?;
            FitFamily::Ann {
                topology: vec![dataset.feature_dim(), 3, 1],
                activation,
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown family {other:?}; expected linear or ann"
            )))
        }
    };

    let (hypothesis, iterations, converged) = match solver.as_str() {
        "closed" => {
            let h = least_squares_closed_form(&dataset)?;
            (Hypothesis::Linear(h), 0usize, true)
        }
        "gd" => {
            let config = GdConfig {
                step_size: flags.parsed_or("step", 0.1).map_err(CliError::Usage)?,
                max_iterations: flags.parsed_or("iters", 1000).map_err(CliError::Usage)?,
                grad_tolerance: 1e-8,
                seed: flags.parsed_or("seed", 0).map_err(CliError::Usage)?,
            };
            let fit = gradient_descent_fit(&family, kind, &dataset, &config)?;
            (fit.hypothesis, fit.iterations_used, fit.converged)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown solver {other:?}; expected closed or gd"
            )))
        }
    };

    hypothesis.save(&out_path)?;
    if dataset.feature_dim() == 1 {
        let predictions = predictions_for(&hypothesis, &dataset)?;
        let plot_path = plot_path_for(&out_path);
        save_plot_csv(&plot_path, &dataset, &predictions)?;
    }
    let risk = empirical_risk(kind, &hypothesis, &dataset)?;
    write_line(
        out,
        &format!(
            "risk={risk} w={} iters={iterations} converged={converged}",
            join(&fitted_weights(&hypothesis))
        ),
    )?;
    Ok(0)
}

fn predictions_for(h: &Hypothesis, dataset: &Dataset) -> Result<Vec<f64>, CliError> {
    let result: erm_core::Result<Vec<f64>> = dataset
        .points()
        .iter()
        .map(|p| h.predict(p.features()))
        .collect();
    Ok(result?)
}

fn plot_path_for(out_path: &std::path::Path) -> PathBuf {
    let mut name = out_path.as_os_str().to_os_string();
    name.push(".plot.csv");
    PathBuf::from(name)
}

fn cmd_robustness(args: &[String], out: &mut dyn Write) -> Result<u8, CliError> {
    let flags = Flags::parse(
        args,
        &[
            "m",
            "true-w",
            "sigma",
            "seed",
            "outlier-label",
            "huber-c",
            "outdir",
        ],
    )
    .map_err(CliError::Usage)?;
    let defaults = RobustnessParams::default();
    let params = RobustnessParams {
        m: flags.parsed_or("m", defaults.m).map_err(CliError::Usage)?,
        true_weight: flags
            .parsed_or("true-w", defaults.true_weight)
            .map_err(CliError::Usage)?,
        noise_sigma: flags
            .parsed_or("sigma", defaults.noise_sigma)
            .map_err(CliError::Usage)?,
        seed: flags.parsed_or("seed", defaults.seed).map_err(CliError::Usage)?,
        outlier_label: flags
            .parsed_or("outlier-label", defaults.outlier_label)
            .map_err(CliError::Usage)?,
        huber_c: flags
            .parsed_or("huber-c", defaults.huber_c)
            .map_err(CliError::Usage)?,
    };
    let outdir: PathBuf = flags.require("outdir").map_err(CliError::Usage)?.into();

    let report = run_robustness(&params, &outdir)?;
    write!(out, "{}", report.to_key_value_lines())
        .map_err(|e| CliError::Runtime(format!("stdout write failed: {e}")))?;
    Ok(if report.robustness_ratio > 1.0 { 0 } else { 1 })
}

fn cmd_plot_svg(args: &[String], _out: &mut dyn Write) -> Result<u8, CliError> {
    let flags = Flags::parse(args, &["csv", "out"]).map_err(CliError::Usage)?;
    let csv = flags.require("csv").map_err(CliError::Usage)?.to_string();
    let out_path = flags.require("out").map_err(CliError::Usage)?.to_string();
    emit_svg(&csv, &out_path)?;
    Ok(0)
}
