//! Composable empirical risk minimization.
//!
//! Datasets, hypothesis spaces and loss functions are independent pieces:
//! any differentiable hypothesis family combines with any compatible loss
//! through the solvers, and the data layer knows nothing about either.
//!
//! - [`data`] — labeled points, datasets, CSV files, synthetic generators,
//!   single-point corruption.
//! - [`hypothesis`] — linear predictors, radius-test decision trees,
//!   bias-free feedforward networks.
//! - [`loss`] — squared error, logistic and Huber losses, the empirical
//!   risk, and negative log-likelihoods.
//! - [`solver`] — closed-form least squares, full-batch gradient descent,
//!   and brute-force test oracles.
//! - [`rng`] — the seeded generator behind every random draw.
//!
//! Everything is an immutable value; operations are pure functions of their
//! arguments, so results are reproducible bit for bit given the same seeds.

pub mod data;
pub mod error;
pub mod hypothesis;
pub mod loss;
mod math;
pub mod rng;
pub mod solver;

pub use data::{
    generate_awgn_dataset, generate_logistic_dataset, load_csv, load_plot_csv, save_csv,
    save_plot_csv, Dataset, FeatureSampler, FeatureVector, LabelSpace, LabeledPoint,
};
pub use error::{Error, Result};
pub use hypothesis::{
    Activation, AnnHypothesis, DecisionTreeHypothesis, Hypothesis, LinearHypothesis, TreeNode,
};
pub use loss::{empirical_risk, gaussian_nll, logistic_nll, loss_derivative, loss_value, LossKind};
pub use solver::{
    empirical_risk_gradient, finite_difference_gradient, gradient_descent_fit, grid_search_1d,
    least_squares_closed_form, FitFamily, FitResult, GdConfig,
};
