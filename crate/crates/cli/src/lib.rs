//! Command-line frontend over the empirical-risk-minimization toolkit:
//! synthetic data generation, model fitting, the loss-robustness experiment,
//! and SVG plot rendering.

mod commands;
mod flags;

pub mod experiment;
pub mod svg;

pub use commands::{run, usage, CliError};
