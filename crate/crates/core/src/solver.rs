//! Empirical-risk minimizers: closed-form least squares for the
//! linear/squared pair, full-batch gradient descent for every differentiable
//! (hypothesis, loss) pair, and the brute-force oracles the test suites
//! check them against.

use crate::data::{Dataset, FeatureVector, LabelSpace};
use crate::error::{Error, Result};
use crate::hypothesis::{Activation, AnnHypothesis, Hypothesis, LinearHypothesis};
use crate::loss::{empirical_risk, loss_derivative, LossKind};
use crate::math::dot;
use crate::rng::SplitMix64;

/// Gradient-descent knobs. The solver stops when the weight gradient's
/// infinity norm drops to `grad_tolerance` or after `max_iterations` updates.
#[derive(Debug, Clone, PartialEq)]
pub struct GdConfig {
    pub step_size: f64,
    pub max_iterations: usize,
    pub grad_tolerance: f64,
    /// Seeds the weight initialization for families that need one.
    pub seed: u64,
}

impl Default for GdConfig {
    fn default() -> Self {
        Self {
            step_size: 0.1,
            max_iterations: 1000,
            grad_tolerance: 1e-8,
            seed: 0,
        }
    }
}

impl GdConfig {
    fn validate(&self) -> Result<()> {
        if !self.step_size.is_finite() || self.step_size <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "step_size must be finite and > 0, got {}",
                self.step_size
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be >= 1".into()));
        }
        if !self.grad_tolerance.is_finite() || self.grad_tolerance < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "grad_tolerance must be finite and >= 0, got {}",
                self.grad_tolerance
            )));
        }
        Ok(())
    }
}

/// Outcome of a fit: the hypothesis, the per-iteration risk values (initial
/// point included), and how the run stopped.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub hypothesis: Hypothesis,
    pub risk_trace: Vec<f64>,
    pub converged: bool,
    pub iterations_used: usize,
}

/// The differentiable hypothesis families gradient descent can fit.
#[derive(Debug, Clone, PartialEq)]
pub enum FitFamily {
    Linear,
    Ann {
        topology: Vec<usize>,
        activation: Activation,
    },
}

impl FitFamily {
    /// Starting weights: zeros for the convex linear problem, seeded
    /// uniform(-0.5, 0.5) for the network (symmetry breaking).
    pub fn initial_weights(&self, feature_dim: usize, seed: u64) -> Result<Vec<f64>> {
        match self {
            FitFamily::Linear => Ok(vec![0.0; feature_dim]),
            FitFamily::Ann { topology, .. } => {
                if topology.first() != Some(&feature_dim) {
                    return Err(Error::DimensionMismatch {
                        expected: feature_dim,
                        found: topology.first().copied().unwrap_or(0),
                    });
                }
                let count = AnnHypothesis::weight_count(topology);
                let mut rng = SplitMix64::new(seed);
                Ok((0..count).map(|_| rng.uniform(-0.5, 0.5)).collect())
            }
        }
    }

    /// Builds the hypothesis value a flat weight vector describes.
    pub fn materialize(&self, weights: &[f64]) -> Result<Hypothesis> {
        match self {
            FitFamily::Linear => Ok(Hypothesis::Linear(LinearHypothesis::new(
                FeatureVector::from_slice(weights)?,
            ))),
            FitFamily::Ann {
                topology,
                activation,
            } => Ok(Hypothesis::Ann(AnnHypothesis::new(
                topology.clone(),
                *activation,
                weights.to_vec(),
            )?)),
        }
    }
}

/// Exact minimizer of the linear/squared-error empirical risk, solving the
/// normal equations by Cholesky factorization of the Gram matrix.
pub fn least_squares_closed_form(data: &Dataset) -> Result<LinearHypothesis> {
    if data.label_space() != LabelSpace::Real {
        return Err(Error::LabelSpaceMismatch {
            expected: LabelSpace::Real,
            found: data.label_space(),
        });
    }
    let n = data.feature_dim();
    let mut gram = vec![vec![0.0; n]; n];
    let mut rhs = vec![0.0; n];
    for p in data.points() {
        let x = p.features().as_slice();
        for j in 0..n {
            for k in 0..n {
                gram[j][k] += x[j] * x[k];
            }
            rhs[j] += x[j] * p.label();
        }
    }

    let weights = cholesky_solve(&gram, &rhs)?;

    // The solution must actually satisfy the normal equations.
    let rhs_norm = rhs.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    for j in 0..n {
        let residual = dot(&gram[j], &weights) - rhs[j];
        if residual.abs() > 1e-8 * (1.0 + rhs_norm) {
            return Err(Error::SingularGram);
        }
    }
    Ok(LinearHypothesis::new(FeatureVector::new(weights)?))
}

/// Solves the symmetric positive definite system `a * x = b`. Reports
/// `SingularGram` when a pivot collapses, which is how rank-deficient
/// feature matrices surface.
fn cholesky_solve(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let n = a.len();
    let scale = (0..n).fold(0.0f64, |acc, j| acc.max(a[j][j].abs()));
    if scale == 0.0 {
        return Err(Error::SingularGram);
    }
    let mut lower = vec![vec![0.0; n]; n];
    for j in 0..n {
        let d = a[j][j] - (0..j).map(|k| lower[j][k] * lower[j][k]).sum::<f64>();
        if d.is_nan() || d <= 1e-12 * scale {
            return Err(Error::SingularGram);
        }
        lower[j][j] = d.sqrt();
        for i in j + 1..n {
            let v = a[i][j] - (0..j).map(|k| lower[i][k] * lower[j][k]).sum::<f64>();
            lower[i][j] = v / lower[j][j];
        }
    }
    // Forward then backward substitution.
    let mut z = vec![0.0; n];
    for i in 0..n {
        let v = b[i] - (0..i).map(|k| lower[i][k] * z[k]).sum::<f64>();
        z[i] = v / lower[i][i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut v = z[i];
        for k in i + 1..n {
            v -= lower[k][i] * x[k];
        }
        x[i] = v / lower[i][i];
    }
    Ok(x)
}

/// Weight gradient of the empirical risk at `weights`:
/// (1/m) * sum over points of loss_derivative(y, h(x)) * dh(x)/dw,
/// accumulated left to right in point order.
pub fn empirical_risk_gradient(
    family: &FitFamily,
    kind: LossKind,
    data: &Dataset,
    weights: &[f64],
) -> Result<Vec<f64>> {
    let hypothesis = family.materialize(weights)?;
    if hypothesis.input_dim() != data.feature_dim() {
        return Err(Error::DimensionMismatch {
            expected: data.feature_dim(),
            found: hypothesis.input_dim(),
        });
    }
    let mut grad = vec![0.0; weights.len()];
    for p in data.points() {
        let yhat = hypothesis.predict(p.features())?;
        let d = loss_derivative(kind, p.label(), yhat)?;
        match &hypothesis {
            Hypothesis::Linear(h) => {
                let g = h.weight_gradient(p.features())?;
                for (acc, v) in grad.iter_mut().zip(g.as_slice()) {
                    *acc += d * v;
                }
            }
            Hypothesis::Ann(h) => {
                let g = h.weight_gradient(p.features())?;
                for (acc, v) in grad.iter_mut().zip(&g) {
                    *acc += d * v;
                }
            }
            Hypothesis::Tree(_) => unreachable!("FitFamily never materializes a tree"),
        }
    }
    let m = data.len() as f64;
    for g in &mut grad {
        *g /= m;
    }
    Ok(grad)
}

/// Full-batch gradient descent on the empirical risk.
///
/// Deterministic given (data, config). Stops early once the gradient's
/// infinity norm reaches `grad_tolerance`; errors out if the risk grows a
/// millionfold over its initial value, which signals a bad step size.
pub fn gradient_descent_fit(
    family: &FitFamily,
    kind: LossKind,
    data: &Dataset,
    config: &GdConfig,
) -> Result<FitResult> {
    config.validate()?;
    if kind.required_label_space() != data.label_space() {
        return Err(Error::LabelSpaceMismatch {
            expected: kind.required_label_space(),
            found: data.label_space(),
        });
    }
    let mut weights = family.initial_weights(data.feature_dim(), config.seed)?;
    let mut hypothesis = family.materialize(&weights)?;
    let initial_risk = empirical_risk(kind, &hypothesis, data)?;
    let mut risk_trace = vec![initial_risk];
    let mut converged = false;
    let mut iterations_used = 0;

    for iteration in 1..=config.max_iterations {
        let grad = empirical_risk_gradient(family, kind, data, &weights)?;
        if inf_norm(&grad) <= config.grad_tolerance {
            converged = true;
            break;
        }
        for (w, g) in weights.iter_mut().zip(&grad) {
            *w -= config.step_size * g;
        }
        iterations_used = iteration;
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::DivergenceDetected {
                iteration,
                risk: f64::NAN,
            });
        }
        hypothesis = family.materialize(&weights)?;
        let risk = empirical_risk(kind, &hypothesis, data)?;
        if !risk.is_finite() || (initial_risk > 0.0 && risk > 1e6 * initial_risk) {
            return Err(Error::DivergenceDetected { iteration, risk });
        }
        risk_trace.push(risk);
    }
    if !converged {
        let grad = empirical_risk_gradient(family, kind, data, &weights)?;
        converged = inf_norm(&grad) <= config.grad_tolerance;
    }

    Ok(FitResult {
        hypothesis,
        risk_trace,
        converged,
        iterations_used,
    })
}

/// Central differences (f(w + s e_j) - f(w - s e_j)) / (2 s) per coordinate.
pub fn finite_difference_gradient<F>(objective: F, weights: &[f64], step: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "finite-difference step must be finite and > 0, got {step}"
        )));
    }
    let mut grad = Vec::with_capacity(weights.len());
    let mut probe = weights.to_vec();
    for j in 0..weights.len() {
        probe[j] = weights[j] + step;
        let plus = objective(&probe);
        probe[j] = weights[j] - step;
        let minus = objective(&probe);
        probe[j] = weights[j];
        if !plus.is_finite() || !minus.is_finite() {
            return Err(Error::NonFiniteObjective);
        }
        grad.push((plus - minus) / (2.0 * step));
    }
    Ok(grad)
}

/// Evaluates the objective at `steps` equally spaced points covering
/// [lo, hi] inclusive and returns the first minimizer (ties break toward
/// lo) together with its value.
pub fn grid_search_1d<F>(objective: F, lo: f64, hi: f64, steps: usize) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    if !lo.is_finite() || !hi.is_finite() || lo >= hi || steps < 2 {
        return Err(Error::InvalidGrid { lo, hi, steps });
    }
    let span = hi - lo;
    let denom = (steps - 1) as f64;
    let mut best_w = lo;
    let mut best_v = f64::INFINITY;
    for i in 0..steps {
        // Multiply before dividing so on-grid rationals stay exact; pin the
        // last point to hi.
        let w = if i == steps - 1 {
            hi
        } else {
            lo + (i as f64 * span) / denom
        };
        let v = objective(w);
        if !v.is_finite() {
            return Err(Error::NonFiniteObjective);
        }
        if v < best_v {
            best_v = v;
            best_w = w;
        }
    }
    Ok((best_w, best_v))
}

fn inf_norm(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}
