//! Loss functions, their derivatives in the prediction, the empirical risk,
//! and the negative log-likelihoods that certify the MLE correspondences.
//!
//! Derivatives here are with respect to the prediction yhat only. Weight
//! gradients are assembled in the solver via the chain rule with the
//! hypothesis weight-gradients, which keeps losses and hypothesis spaces
//! independent of each other.

use std::fmt;

use crate::data::{Dataset, LabelSpace};
use crate::error::{Error, Result};
use crate::hypothesis::Hypothesis;
use crate::math::sigmoid;

/// The loss menu: squared error and Huber for regression, logistic for
/// binary labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LossKind {
    SquaredError,
    Logistic,
    /// Quadratic for residuals up to the threshold, linear beyond it.
    Huber(f64),
}

impl LossKind {
    /// Default Huber threshold when the caller has no preference.
    pub const DEFAULT_HUBER_C: f64 = 1.0;

    /// Validated Huber constructor: the threshold must be positive and finite.
    pub fn huber(c: f64) -> Result<LossKind> {
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::InvalidHuberThreshold { c });
        }
        Ok(LossKind::Huber(c))
    }

    /// The label space this loss is defined on.
    pub fn required_label_space(&self) -> LabelSpace {
        match self {
            LossKind::SquaredError | LossKind::Huber(_) => LabelSpace::Real,
            LossKind::Logistic => LabelSpace::Binary,
        }
    }

    fn validate(&self) -> Result<()> {
        if let LossKind::Huber(c) = *self {
            if !c.is_finite() || c <= 0.0 {
                return Err(Error::InvalidHuberThreshold { c });
            }
        }
        Ok(())
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LossKind::SquaredError => f.write_str("squared"),
            LossKind::Logistic => f.write_str("logistic"),
            LossKind::Huber(_) => f.write_str("huber"),
        }
    }
}

/// Overflow-safe log(1 + e^t): for t > 30 the direct form would lose the
/// linear term, so it switches to t + log1p(e^(-t)).
fn softplus(t: f64) -> f64 {
    if t > 30.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

fn check_inputs(kind: LossKind, y: f64, yhat: f64) -> Result<()> {
    kind.validate()?;
    if !y.is_finite() || !yhat.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    if kind == LossKind::Logistic && !(y == 1.0 || y == -1.0) {
        return Err(Error::InvalidLabel {
            label: y,
            space: LabelSpace::Binary,
        });
    }
    Ok(())
}

/// Loss of predicting `yhat` for a point with label `y`.
pub fn loss_value(kind: LossKind, y: f64, yhat: f64) -> Result<f64> {
    check_inputs(kind, y, yhat)?;
    let value = match kind {
        LossKind::SquaredError => {
            let r = y - yhat;
            r * r
        }
        LossKind::Logistic => softplus(-y * yhat),
        LossKind::Huber(c) => {
            let r = y - yhat;
            if r.abs() <= c {
                0.5 * (r * r)
            } else {
                c * (r.abs() - 0.5 * c)
            }
        }
    };
    Ok(value)
}

/// Derivative of the loss in the prediction yhat.
///
/// At the Huber threshold |y - yhat| = c the quadratic-branch value is
/// returned; both branches coincide there.
pub fn loss_derivative(kind: LossKind, y: f64, yhat: f64) -> Result<f64> {
    check_inputs(kind, y, yhat)?;
    let value = match kind {
        LossKind::SquaredError => -2.0 * (y - yhat),
        LossKind::Logistic => -y * sigmoid(-y * yhat),
        LossKind::Huber(c) => {
            let r = y - yhat;
            if r.abs() <= c {
                -r
            } else {
                -c * r.signum()
            }
        }
    };
    Ok(value)
}

/// Average loss of `h` over the dataset, summed left to right in point order.
pub fn empirical_risk(kind: LossKind, h: &Hypothesis, data: &Dataset) -> Result<f64> {
    kind.validate()?;
    if h.input_dim() != data.feature_dim() {
        return Err(Error::DimensionMismatch {
            expected: data.feature_dim(),
            found: h.input_dim(),
        });
    }
    if kind.required_label_space() != data.label_space() {
        return Err(Error::LabelSpaceMismatch {
            expected: kind.required_label_space(),
            found: data.label_space(),
        });
    }
    let mut sum = 0.0;
    for p in data.points() {
        sum += loss_value(kind, p.label(), h.predict(p.features())?)?;
    }
    Ok(sum / data.len() as f64)
}

/// Negative log-likelihood of the labels under y = h(x) + eps with
/// eps ~ N(0, sigma^2):
/// (m/2) log(2 pi sigma^2) + (1 / (2 sigma^2)) * sum of squared residuals.
pub fn gaussian_nll(h: &Hypothesis, data: &Dataset, sigma: f64) -> Result<f64> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "sigma must be finite and > 0, got {sigma}"
        )));
    }
    if h.input_dim() != data.feature_dim() {
        return Err(Error::DimensionMismatch {
            expected: data.feature_dim(),
            found: h.input_dim(),
        });
    }
    if data.label_space() != LabelSpace::Real {
        return Err(Error::LabelSpaceMismatch {
            expected: LabelSpace::Real,
            found: data.label_space(),
        });
    }
    let m = data.len() as f64;
    let var = sigma * sigma;
    let mut sum_sq = 0.0;
    for p in data.points() {
        let r = p.label() - h.predict(p.features())?;
        sum_sq += r * r;
    }
    Ok(0.5 * m * (std::f64::consts::TAU * var).ln() + sum_sq / (2.0 * var))
}

/// Negative log-likelihood of binary labels under
/// Prob{y = +1} = 1 / (1 + e^(-h(x))), which is m times the logistic
/// empirical risk.
pub fn logistic_nll(h: &Hypothesis, data: &Dataset) -> Result<f64> {
    if h.input_dim() != data.feature_dim() {
        return Err(Error::DimensionMismatch {
            expected: data.feature_dim(),
            found: h.input_dim(),
        });
    }
    if data.label_space() != LabelSpace::Binary {
        return Err(Error::LabelSpaceMismatch {
            expected: LabelSpace::Binary,
            found: data.label_space(),
        });
    }
    let mut sum = 0.0;
    for p in data.points() {
        sum += loss_value(LossKind::Logistic, p.label(), h.predict(p.features())?)?;
    }
    Ok(sum)
}
