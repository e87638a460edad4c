//! Data points, datasets, CSV ingestion/emission and synthetic generators.
//!
//! A [`Dataset`] is an ordered list of labeled points with a declared
//! [`LabelSpace`] and a fixed feature dimension. All types are immutable after
//! construction; operations that "modify" a dataset return a new value.
//!
//! The CSV schema is `x,y` (1-D) or `x1,..,xn,y`, with an optional trailing
//! `yhat` prediction column that is ignored on load. Plot files written by
//! [`save_plot_csv`] carry exactly the columns `x,y,yhat`. Floats are emitted
//! in shortest round-trip decimal form, so a save/load cycle is lossless.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::math::{dot, sigmoid};
use crate::rng::SplitMix64;

/// Set of admissible label values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelSpace {
    /// Any finite real label (regression).
    Real,
    /// Exactly -1 or +1 (binary classification).
    Binary,
}

impl LabelSpace {
    pub fn admits(&self, label: f64) -> bool {
        match self {
            LabelSpace::Real => label.is_finite(),
            LabelSpace::Binary => label == 1.0 || label == -1.0,
        }
    }
}

/// Ordered list of finite real feature values, length >= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(Self { values })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// A feature vector together with its observed label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    features: FeatureVector,
    label: f64,
}

impl LabeledPoint {
    pub fn new(features: FeatureVector, label: f64) -> Result<Self> {
        if !label.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        Ok(Self { features, label })
    }

    pub fn features(&self) -> &FeatureVector {
        &self.features
    }

    pub fn label(&self) -> f64 {
        self.label
    }
}

/// An ordered, immutable collection of labeled points sharing one feature
/// dimension and one label space. Always holds at least one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    points: Vec<LabeledPoint>,
    label_space: LabelSpace,
    feature_dim: usize,
}

impl Dataset {
    pub fn new(points: Vec<LabeledPoint>, label_space: LabelSpace) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::ZeroPoints);
        };
        let feature_dim = first.features().len();
        for p in &points {
            if p.features().len() != feature_dim {
                return Err(Error::DimensionMismatch {
                    expected: feature_dim,
                    found: p.features().len(),
                });
            }
            if !label_space.admits(p.label()) {
                return Err(Error::InvalidLabel {
                    label: p.label(),
                    space: label_space,
                });
            }
        }
        Ok(Self {
            points,
            label_space,
            feature_dim,
        })
    }

    pub fn points(&self) -> &[LabeledPoint] {
        &self.points
    }

    /// Number of points m.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Feature dimension n.
    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn label_space(&self) -> LabelSpace {
        self.label_space
    }

    /// Returns a copy of this dataset with the label of point `index`
    /// replaced by `new_label`. All other points are untouched.
    pub fn corrupt_point(&self, index: usize, new_label: f64) -> Result<Dataset> {
        if index >= self.points.len() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.points.len(),
            });
        }
        if !self.label_space.admits(new_label) {
            return Err(Error::InvalidLabel {
                label: new_label,
                space: self.label_space,
            });
        }
        let mut points = self.points.clone();
        points[index] = LabeledPoint::new(points[index].features().clone(), new_label)?;
        Ok(Dataset {
            points,
            label_space: self.label_space,
            feature_dim: self.feature_dim,
        })
    }

    /// Index of the point with the smallest feature value, ties broken by
    /// lowest index. Only defined for 1-D datasets.
    pub fn leftmost_point(&self) -> Result<usize> {
        if self.feature_dim != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.feature_dim,
            });
        }
        let mut best = 0;
        for (i, p) in self.points.iter().enumerate().skip(1) {
            if p.features().as_slice()[0] < self.points[best].features().as_slice()[0] {
                best = i;
            }
        }
        Ok(best)
    }
}

/// Per-coordinate feature distribution used by the synthetic generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureSampler {
    Uniform { lo: f64, hi: f64 },
}

impl FeatureSampler {
    fn validate(&self) -> Result<()> {
        let FeatureSampler::Uniform { lo, hi } = *self;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidSamplerRange { lo, hi });
        }
        Ok(())
    }

    fn sample(&self, rng: &mut SplitMix64) -> f64 {
        let FeatureSampler::Uniform { lo, hi } = *self;
        rng.uniform(lo, hi)
    }
}

impl Default for FeatureSampler {
    fn default() -> Self {
        FeatureSampler::Uniform { lo: -1.0, hi: 1.0 }
    }
}

/// Generates `m` points with labels y = w.x + sigma * eps, eps ~ N(0, 1).
///
/// Features are sampled per coordinate from `sampler`, then one Gaussian draw
/// is consumed per point, in point order. The output is a pure function of
/// the arguments.
pub fn generate_awgn_dataset(
    true_weights: &FeatureVector,
    m: usize,
    sampler: FeatureSampler,
    noise_sigma: f64,
    seed: u64,
) -> Result<Dataset> {
    if m == 0 {
        return Err(Error::ZeroPoints);
    }
    sampler.validate()?;
    if !noise_sigma.is_finite() || noise_sigma < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "noise_sigma must be finite and >= 0, got {noise_sigma}"
        )));
    }
    let n = true_weights.len();
    let mut rng = SplitMix64::new(seed);
    let mut points = Vec::with_capacity(m);
    for _ in 0..m {
        let x: Vec<f64> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
        let eps = rng.standard_normal();
        let y = dot(true_weights.as_slice(), &x) + noise_sigma * eps;
        points.push(LabeledPoint::new(FeatureVector::new(x)?, y)?);
    }
    Dataset::new(points, LabelSpace::Real)
}

/// Generates `m` points with labels in {-1, +1} drawn with
/// Prob{y = +1} = 1 / (1 + e^(-w.x)).
///
/// One uniform draw decides each label, consumed right after that point's
/// features, so the output is a pure function of the arguments.
pub fn generate_logistic_dataset(
    true_weights: &FeatureVector,
    m: usize,
    sampler: FeatureSampler,
    seed: u64,
) -> Result<Dataset> {
    if m == 0 {
        return Err(Error::ZeroPoints);
    }
    sampler.validate()?;
    let n = true_weights.len();
    let mut rng = SplitMix64::new(seed);
    let mut points = Vec::with_capacity(m);
    for _ in 0..m {
        let x: Vec<f64> = (0..n).map(|_| sampler.sample(&mut rng)).collect();
        let p = sigmoid(dot(true_weights.as_slice(), &x));
        let y = if rng.unit() < p { 1.0 } else { -1.0 };
        points.push(LabeledPoint::new(FeatureVector::new(x)?, y)?);
    }
    Dataset::new(points, LabelSpace::Binary)
}

/// Loads a dataset from CSV. Feature columns come first, then the label
/// column `y`; a trailing `yhat` column, if present, is parsed and dropped.
pub fn load_csv(path: impl AsRef<Path>, label_space: LabelSpace) -> Result<Dataset> {
    let path = path.as_ref();
    let text = read_file(path)?;
    let (points, _) = parse_rows(&text, label_space)?;
    Dataset::new(points, label_space)
}

/// Writes a dataset without predictions: header `x,y` (1-D) or
/// `x1,..,xn,y`, one row per point in dataset order.
pub fn save_csv(path: impl AsRef<Path>, dataset: &Dataset) -> Result<()> {
    let path = path.as_ref();
    let n = dataset.feature_dim();
    let mut out = String::new();
    if n == 1 {
        out.push_str("x,y\n");
    } else {
        for j in 1..=n {
            let _ = write!(out, "x{j},");
        }
        out.push_str("y\n");
    }
    for p in dataset.points() {
        for v in p.features().as_slice() {
            let _ = write!(out, "{v},");
        }
        let _ = writeln!(out, "{}", p.label());
    }
    std::fs::write(path, out).map_err(|source| Error::IoFailure {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes a 1-D dataset and its predictions as a plot-ready `x,y,yhat` file.
pub fn save_plot_csv(
    path: impl AsRef<Path>,
    dataset: &Dataset,
    predictions: &[f64],
) -> Result<()> {
    let path = path.as_ref();
    if dataset.feature_dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: dataset.feature_dim(),
        });
    }
    if predictions.len() != dataset.len() {
        return Err(Error::DimensionMismatch {
            expected: dataset.len(),
            found: predictions.len(),
        });
    }
    let mut out = String::from("x,y,yhat\n");
    for (p, yhat) in dataset.points().iter().zip(predictions) {
        let x = p.features().as_slice()[0];
        // `{}` prints the shortest decimal that round-trips the f64 exactly.
        writeln!(out, "{},{},{}", x, p.label(), yhat).expect("string write cannot fail");
    }
    std::fs::write(path, out).map_err(|source| Error::IoFailure {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a plot file written by [`save_plot_csv`]: the dataset plus the
/// `yhat` column. The header must be exactly `x,y,yhat`.
pub fn load_plot_csv(path: impl AsRef<Path>) -> Result<(Dataset, Vec<f64>)> {
    let path = path.as_ref();
    let text = read_file(path)?;
    let header = text.lines().next().map(str::trim_end);
    if header != Some("x,y,yhat") {
        return Err(Error::MalformedRow { line: 1 });
    }
    let (points, predictions) = parse_rows(&text, LabelSpace::Real)?;
    let dataset = Dataset::new(points, LabelSpace::Real)?;
    Ok((dataset, predictions))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::MissingFile {
                path: path.to_path_buf(),
            }
        } else {
            Error::IoFailure {
                path: path.to_path_buf(),
                source,
            }
        }
    })
}

/// Shared CSV body parser. Returns the points and the `yhat` column
/// (empty when the file has no `yhat`).
fn parse_rows(text: &str, label_space: LabelSpace) -> Result<(Vec<LabeledPoint>, Vec<f64>)> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(Error::ZeroPoints);
    };
    let columns: Vec<&str> = header.trim_end().split(',').map(str::trim).collect();
    let y_pos = columns
        .iter()
        .position(|c| *c == "y")
        .ok_or(Error::MalformedRow { line: 1 })?;
    let has_yhat = match columns.len() - y_pos {
        1 => false,
        2 if columns[y_pos + 1] == "yhat" => true,
        _ => return Err(Error::MalformedRow { line: 1 }),
    };
    if y_pos == 0 {
        // No feature columns.
        return Err(Error::MalformedRow { line: 1 });
    }

    let mut points = Vec::new();
    let mut predictions = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1; // 1-based, counting the header
        let cells: Vec<&str> = raw.trim_end().split(',').map(str::trim).collect();
        if cells.len() != columns.len() {
            return Err(Error::MalformedRow { line });
        }
        let mut parsed = Vec::with_capacity(cells.len());
        for (cell, column) in cells.iter().zip(&columns) {
            let value: f64 = cell.parse().map_err(|_| Error::MalformedRow { line })?;
            if !value.is_finite() {
                return Err(Error::NonFiniteValue {
                    line,
                    column: (*column).to_string(),
                });
            }
            parsed.push(value);
        }
        let label = parsed[y_pos];
        if !label_space.admits(label) {
            return Err(Error::LabelOutsideSpace { line });
        }
        if has_yhat {
            predictions.push(parsed[y_pos + 1]);
        }
        let features = FeatureVector::new(parsed[..y_pos].to_vec())?;
        points.push(LabeledPoint::new(features, label)?);
    }
    if points.is_empty() {
        return Err(Error::ZeroPoints);
    }
    Ok((points, predictions))
}
