//! Crate-wide error type.

use std::path::PathBuf;

use crate::data::LabelSpace;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by dataset handling, hypothesis evaluation, losses and solvers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The requested file does not exist.
    #[error("file not found: {path}")]
    MissingFile { path: PathBuf },

    /// An I/O operation failed.
    #[error("i/o failure on {path}: {source}")]
    IoFailure {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A CSV row could not be parsed (wrong cell count or unparseable cell).
    /// Lines are 1-based and count the header.
    #[error("malformed row at line {line}")]
    MalformedRow { line: usize },

    /// A CSV cell parsed as NaN or infinity.
    #[error("non-finite value at line {line}, column {column}")]
    NonFiniteValue { line: usize, column: String },

    /// A CSV label does not belong to the declared label space.
    #[error("label outside the declared label space at line {line}")]
    LabelOutsideSpace { line: usize },

    /// A label value does not belong to the given label space.
    #[error("label {label} is not admitted by the {space:?} label space")]
    InvalidLabel { label: f64, space: LabelSpace },

    /// A feature value, weight or loss input is NaN or infinite.
    #[error("non-finite input")]
    NonFiniteInput,

    /// Uniform sampler bounds must satisfy lo < hi with both finite.
    #[error("invalid sampler range [{lo}, {hi})")]
    InvalidSamplerRange { lo: f64, hi: f64 },

    /// Datasets must contain at least one point.
    #[error("a dataset must contain at least one point")]
    ZeroPoints,

    /// A point index is outside the dataset.
    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    /// Two vector- or matrix-shaped values disagree in dimension.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A loss was paired with a dataset whose label space it does not support.
    #[error("loss requires {expected:?} labels but the dataset declares {found:?}")]
    LabelSpaceMismatch {
        expected: LabelSpace,
        found: LabelSpace,
    },

    /// The Huber threshold must be positive and finite.
    #[error("invalid Huber threshold c = {c}; c must be positive and finite")]
    InvalidHuberThreshold { c: f64 },

    /// A hypothesis description could not be parsed.
    #[error("malformed model at line {line}: {message}")]
    MalformedModel { line: usize, message: String },

    /// The Gram matrix of the normal equations is (numerically) singular.
    #[error("singular Gram matrix: features are rank deficient")]
    SingularGram,

    /// Gradient descent blew up; the step size is too large.
    #[error("divergence detected at iteration {iteration}: risk {risk} exceeds 1e6 x initial")]
    DivergenceDetected { iteration: usize, risk: f64 },

    /// An objective returned NaN or infinity during an oracle computation.
    #[error("objective evaluated to a non-finite value")]
    NonFiniteObjective,

    /// Grid bounds must satisfy lo < hi with at least two steps.
    #[error("invalid grid: lo {lo} must be < hi {hi} and steps {steps} >= 2")]
    InvalidGrid { lo: f64, hi: f64, steps: usize },

    /// A solver configuration field is out of range.
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}
