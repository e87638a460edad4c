//! The loss-robustness experiment: fit a line by squared and by Huber loss
//! on a clean dataset and on the same dataset with one corrupted point, and
//! compare how far each fitted weight moves.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use erm_core::{
    empirical_risk, generate_awgn_dataset, gradient_descent_fit, least_squares_closed_form,
    save_plot_csv, Dataset, Error, FeatureSampler, FeatureVector, FitFamily, GdConfig, Hypothesis,
    LinearHypothesis, LossKind, Result,
};

/// Experiment inputs. Defaults match the scale of the reference figures:
/// features in [-1, 1], labels within about +/-20.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessParams {
    pub m: usize,
    pub true_weight: f64,
    pub noise_sigma: f64,
    pub seed: u64,
    pub outlier_label: f64,
    pub huber_c: f64,
}

impl Default for RobustnessParams {
    fn default() -> Self {
        Self {
            m: 20,
            true_weight: 15.0,
            noise_sigma: 1.0,
            seed: 7,
            outlier_label: -20.0,
            huber_c: 1.0,
        }
    }
}

/// Internal gradient-descent settings for the Huber fits. Features lie in
/// [-1, 1], so the risk curvature is at most sum(x^2)/m <= 1 and a step of
/// 0.5 is stable for any seed.
fn huber_gd_config() -> GdConfig {
    GdConfig {
        step_size: 0.5,
        max_iterations: 10_000,
        grad_tolerance: 1e-10,
        seed: 0,
    }
}

/// The four fitted weights, their deviations under corruption, and where
/// the plot files went.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessReport {
    pub w_clean_sq: f64,
    pub w_corrupt_sq: f64,
    pub w_clean_huber: f64,
    pub w_corrupt_huber: f64,
    pub deviation_sq: f64,
    pub deviation_huber: f64,
    pub robustness_ratio: f64,
    pub iters_clean_sq: usize,
    pub iters_corrupt_sq: usize,
    pub iters_clean_huber: usize,
    pub iters_corrupt_huber: usize,
    pub csv_clean_sq: PathBuf,
    pub csv_corrupt_sq: PathBuf,
    pub csv_clean_huber: PathBuf,
    pub csv_corrupt_huber: PathBuf,
}

impl RobustnessReport {
    /// key=value lines in a fixed order; this layout is part of the CLI
    /// contract.
    pub fn to_key_value_lines(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "w_clean_sq={}", self.w_clean_sq);
        let _ = writeln!(out, "w_corrupt_sq={}", self.w_corrupt_sq);
        let _ = writeln!(out, "w_clean_huber={}", self.w_clean_huber);
        let _ = writeln!(out, "w_corrupt_huber={}", self.w_corrupt_huber);
        let _ = writeln!(out, "deviation_sq={}", self.deviation_sq);
        let _ = writeln!(out, "deviation_huber={}", self.deviation_huber);
        let _ = writeln!(out, "robustness_ratio={}", self.robustness_ratio);
        let _ = writeln!(out, "iters_clean_sq={}", self.iters_clean_sq);
        let _ = writeln!(out, "iters_corrupt_sq={}", self.iters_corrupt_sq);
        let _ = writeln!(out, "iters_clean_huber={}", self.iters_clean_huber);
        let _ = writeln!(out, "iters_corrupt_huber={}", self.iters_corrupt_huber);
        let _ = writeln!(out, "csv_clean_sq={}", self.csv_clean_sq.display());
        let _ = writeln!(out, "csv_corrupt_sq={}", self.csv_corrupt_sq.display());
        let _ = writeln!(out, "csv_clean_huber={}", self.csv_clean_huber.display());
        let _ = writeln!(out, "csv_corrupt_huber={}", self.csv_corrupt_huber.display());
        out
    }
}

fn linear_weight(h: &Hypothesis) -> f64 {
    match h {
        Hypothesis::Linear(l) => l.weights().as_slice()[0],
        _ => unreachable!("robustness fits are linear"),
    }
}

fn predictions(weight: f64, data: &Dataset) -> Result<Vec<f64>> {
    let h = LinearHypothesis::new(FeatureVector::from_slice(&[weight])?);
    data.points()
        .iter()
        .map(|p| h.predict(p.features()))
        .collect()
}

fn fit_huber(data: &Dataset, c: f64) -> Result<(f64, usize)> {
    let fit = gradient_descent_fit(
        &FitFamily::Linear,
        LossKind::huber(c)?,
        data,
        &huber_gd_config(),
    )?;
    Ok((linear_weight(&fit.hypothesis), fit.iterations_used))
}

/// Runs the full experiment and writes the four plot files into `outdir`
/// (created if missing): `clean_sq.csv`, `corrupt_sq.csv`, `clean_huber.csv`
/// and `corrupt_huber.csv`.
pub fn run_robustness(params: &RobustnessParams, outdir: &Path) -> Result<RobustnessReport> {
    let true_w = FeatureVector::from_slice(&[params.true_weight])?;
    let clean = generate_awgn_dataset(
        &true_w,
        params.m,
        FeatureSampler::default(),
        params.noise_sigma,
        params.seed,
    )?;
    let leftmost = clean.leftmost_point()?;
    let corrupt = clean.corrupt_point(leftmost, params.outlier_label)?;

    let w_clean_sq = least_squares_closed_form(&clean)?.weights().as_slice()[0];
    let w_corrupt_sq = least_squares_closed_form(&corrupt)?.weights().as_slice()[0];
    let (w_clean_huber, iters_clean_huber) = fit_huber(&clean, params.huber_c)?;
    let (w_corrupt_huber, iters_corrupt_huber) = fit_huber(&corrupt, params.huber_c)?;

    std::fs::create_dir_all(outdir).map_err(|source| Error::IoFailure {
        path: outdir.to_path_buf(),
        source,
    })?;
    let csv_clean_sq = outdir.join("clean_sq.csv");
    let csv_corrupt_sq = outdir.join("corrupt_sq.csv");
    let csv_clean_huber = outdir.join("clean_huber.csv");
    let csv_corrupt_huber = outdir.join("corrupt_huber.csv");
    save_plot_csv(&csv_clean_sq, &clean, &predictions(w_clean_sq, &clean)?)?;
    save_plot_csv(&csv_corrupt_sq, &corrupt, &predictions(w_corrupt_sq, &corrupt)?)?;
    save_plot_csv(&csv_clean_huber, &clean, &predictions(w_clean_huber, &clean)?)?;
    save_plot_csv(
        &csv_corrupt_huber,
        &corrupt,
        &predictions(w_corrupt_huber, &corrupt)?,
    )?;

    let deviation_sq = (w_corrupt_sq - w_clean_sq).abs();
    let deviation_huber = (w_corrupt_huber - w_clean_huber).abs();
    Ok(RobustnessReport {
        w_clean_sq,
        w_corrupt_sq,
        w_clean_huber,
        w_corrupt_huber,
        deviation_sq,
        deviation_huber,
        robustness_ratio: deviation_sq / deviation_huber,
        iters_clean_sq: 0,
        iters_corrupt_sq: 0,
        iters_clean_huber,
        iters_corrupt_huber,
        csv_clean_sq,
        csv_corrupt_sq,
        csv_clean_huber,
        csv_corrupt_huber,
    })
}

/// Empirical risk of a 1-D linear weight, used when cross-checking the
/// experiment's fits against the grid-search oracle.
pub fn linear_risk_objective(kind: LossKind, data: &Dataset) -> impl Fn(f64) -> f64 + '_ {
    move |w: f64| {
        let h = Hypothesis::Linear(LinearHypothesis::new(
            FeatureVector::from_slice(&[w]).expect("finite weight"),
        ));
        empirical_risk(kind, &h, data).expect("compatible loss and data")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_corruption_moves_nothing() {
        // Corrupting the leftmost point with its own label leaves both fits
        // exactly where they were.
        let params = RobustnessParams::default();
        let true_w = FeatureVector::from_slice(&[params.true_weight]).unwrap();
        let clean = generate_awgn_dataset(
            &true_w,
            params.m,
            FeatureSampler::default(),
            params.noise_sigma,
            params.seed,
        )
        .unwrap();
        let leftmost = clean.leftmost_point().unwrap();
        let own_label = clean.points()[leftmost].label();

        let dir = tempfile::tempdir().unwrap();
        let report = run_robustness(
            &RobustnessParams {
                outlier_label: own_label,
                ..params
            },
            dir.path(),
        )
        .unwrap();
        assert_eq!(report.deviation_sq, 0.0);
        assert_eq!(report.deviation_huber, 0.0);
        assert!(report.robustness_ratio.is_nan());
    }

    #[test]
    fn default_run_reproduces_the_oracle_weights() {
        // Golden values computed beforehand with grid_search_1d over
        // [-50, 50] in 100001 steps; the solver weights must land within
        // one grid spacing (0.001).
        let dir = tempfile::tempdir().unwrap();
        let report = run_robustness(&RobustnessParams::default(), dir.path()).unwrap();
        let golden = [
            (report.w_clean_sq, 14.540999999999997),
            (report.w_corrupt_sq, 15.727999999999994),
            (report.w_clean_huber, 14.719999999999999),
            (report.w_corrupt_huber, 14.971000000000004),
        ];
        for (got, expected) in golden {
            assert!(
                (got - expected).abs() <= 1e-3,
                "weight {got} drifted from oracle {expected}"
            );
        }
        assert!(report.robustness_ratio > 3.0);
        for path in [
            &report.csv_clean_sq,
            &report.csv_corrupt_sq,
            &report.csv_clean_huber,
            &report.csv_corrupt_huber,
        ] {
            assert!(path.exists());
        }
    }

    #[test]
    fn wilder_outliers_move_the_squared_fit_further() {
        // Pushing the outlier from -20 to -200 grows the squared deviation
        // far more than the Huber deviation, whose per-point pull is capped
        // at c * |x| / m.
        let dir20 = tempfile::tempdir().unwrap();
        let dir200 = tempfile::tempdir().unwrap();
        let at_20 = run_robustness(&RobustnessParams::default(), dir20.path()).unwrap();
        let at_200 = run_robustness(
            &RobustnessParams {
                outlier_label: -200.0,
                ..RobustnessParams::default()
            },
            dir200.path(),
        )
        .unwrap();
        assert!(at_200.deviation_sq > at_20.deviation_sq);
        let huber_growth = at_200.deviation_huber - at_20.deviation_huber;
        let squared_growth = at_200.deviation_sq - at_20.deviation_sq;
        assert!(
            huber_growth < squared_growth,
            "huber grew {huber_growth}, squared grew {squared_growth}"
        );

        // The grid oracle confirms the corrupted fits the solver produced at
        // the wilder setting.
        let true_w = FeatureVector::from_slice(&[15.0]).unwrap();
        let clean = generate_awgn_dataset(&true_w, 20, FeatureSampler::default(), 1.0, 7).unwrap();
        let corrupt = clean
            .corrupt_point(clean.leftmost_point().unwrap(), -200.0)
            .unwrap();
        for (solver_w, kind) in [
            (at_200.w_corrupt_sq, LossKind::SquaredError),
            (at_200.w_corrupt_huber, LossKind::Huber(1.0)),
        ] {
            let (oracle_w, _) = erm_core::grid_search_1d(
                linear_risk_objective(kind, &corrupt),
                -50.0,
                50.0,
                100_001,
            )
            .unwrap();
            assert!(
                (solver_w - oracle_w).abs() <= 1e-3,
                "{kind:?}: solver {solver_w} vs oracle {oracle_w}"
            );
        }
    }

    #[test]
    fn report_lines_have_a_stable_key_order() {
        let dir = tempfile::tempdir().unwrap();
        let report = run_robustness(&RobustnessParams::default(), dir.path()).unwrap();
        let lines: Vec<String> = report
            .to_key_value_lines()
            .lines()
            .map(|l| l.split('=').next().unwrap().to_string())
            .collect();
        assert_eq!(
            lines,
            [
                "w_clean_sq",
                "w_corrupt_sq",
                "w_clean_huber",
                "w_corrupt_huber",
                "deviation_sq",
                "deviation_huber",
                "robustness_ratio",
                "iters_clean_sq",
                "iters_corrupt_sq",
                "iters_clean_huber",
                "iters_corrupt_huber",
                "csv_clean_sq",
                "csv_corrupt_sq",
                "csv_clean_huber",
                "csv_corrupt_huber",
            ]
        );
    }
}
