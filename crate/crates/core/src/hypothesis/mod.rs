//! The three hypothesis families: linear predictors, radius-test decision
//! trees, and bias-free feedforward networks.
//!
//! Fitted models can be saved to and reloaded from a plain-text key/value
//! format with a leading `format=1` version line.

mod ann;
mod linear;
mod tree;

pub use ann::AnnHypothesis;
pub use linear::LinearHypothesis;
pub use tree::{DecisionTreeHypothesis, TreeNode};

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::data::FeatureVector;
use crate::error::{Error, Result};
use crate::math::sigmoid;

/// Neuron activation function g(z). Each kind is total on finite reals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Identity,
    Relu,
    Sigmoid,
}

impl Activation {
    pub fn apply(&self, z: f64) -> f64 {
        match self {
            Activation::Identity => z,
            Activation::Relu => {
                if z > 0.0 {
                    z
                } else {
                    0.0
                }
            }
            Activation::Sigmoid => sigmoid(z),
        }
    }

    /// dg/dz. ReLU uses the one-sided value 0 at the kink.
    pub fn derivative(&self, z: f64) -> f64 {
        match self {
            Activation::Identity => 1.0,
            Activation::Relu => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Sigmoid => {
                let s = sigmoid(z);
                s * (1.0 - s)
            }
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Activation::Identity => "identity",
            Activation::Relu => "relu",
            Activation::Sigmoid => "sigmoid",
        };
        f.write_str(name)
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Activation::Identity),
            "relu" => Ok(Activation::Relu),
            "sigmoid" => Ok(Activation::Sigmoid),
            other => Err(Error::MalformedModel {
                line: 0,
                message: format!("unknown activation {other:?}"),
            }),
        }
    }
}

/// A predictor from any of the three families.
#[derive(Debug, Clone, PartialEq)]
pub enum Hypothesis {
    Linear(LinearHypothesis),
    Tree(DecisionTreeHypothesis),
    Ann(AnnHypothesis),
}

impl Hypothesis {
    pub fn input_dim(&self) -> usize {
        match self {
            Hypothesis::Linear(h) => h.input_dim(),
            Hypothesis::Tree(h) => h.input_dim(),
            Hypothesis::Ann(h) => h.input_dim(),
        }
    }

    pub fn predict(&self, x: &FeatureVector) -> Result<f64> {
        match self {
            Hypothesis::Linear(h) => h.predict(x),
            Hypothesis::Tree(h) => h.predict(x),
            Hypothesis::Ann(h) => h.forward(x),
        }
    }

    /// Serializes to the versioned plain-text model format.
    pub fn encode(&self) -> String {
        let mut out = String::from("format=1\n");
        match self {
            Hypothesis::Linear(h) => {
                out.push_str("family=linear\n");
                out.push_str(&format!("weights={}\n", join_floats(h.weights().as_slice())));
            }
            Hypothesis::Ann(h) => {
                out.push_str("family=ann\n");
                let sizes: Vec<String> = h.topology().iter().map(|s| s.to_string()).collect();
                out.push_str(&format!("topology={}\n", sizes.join(",")));
                out.push_str(&format!("activation={}\n", h.activation()));
                out.push_str(&format!("weights={}\n", join_floats(h.weights())));
            }
            Hypothesis::Tree(h) => {
                out.push_str("family=tree\n");
                out.push_str(&format!("dim={}\n", h.input_dim()));
                let mut flat = FlatTree::default();
                flat.collect(h.root());
                out.push_str(&format!("structure={}\n", flat.structure));
                let centers: Vec<String> = flat.centers.iter().map(|c| join_floats(c)).collect();
                out.push_str(&format!("centers={}\n", centers.join("|")));
                out.push_str(&format!("radii={}\n", join_floats(&flat.radii)));
                out.push_str(&format!("leaves={}\n", join_floats(&flat.leaves)));
            }
        }
        out
    }

    /// Parses the plain-text model format.
    pub fn decode(text: &str) -> Result<Hypothesis> {
        let fields = parse_fields(text)?;
        let family = fields.require("family")?;
        match family.as_str() {
            "linear" => {
                let weights = parse_floats(&fields.require("weights")?, fields.line("weights"))?;
                let weights = FeatureVector::new(weights).map_err(|_| Error::MalformedModel {
                    line: fields.line("weights"),
                    message: "weights must be a non-empty list of finite reals".into(),
                })?;
                Ok(Hypothesis::Linear(LinearHypothesis::new(weights)))
            }
            "ann" => {
                let topology_line = fields.line("topology");
                let topology: Vec<usize> = fields
                    .require("topology")?
                    .split(',')
                    .map(|s| {
                        s.trim().parse().map_err(|_| Error::MalformedModel {
                            line: topology_line,
                            message: format!("bad layer size {s:?}"),
                        })
                    })
                    .collect::<Result<_>>()?;
                let activation: Activation = fields.require("activation")?.parse().map_err(
                    |e| match e {
                        Error::MalformedModel { message, .. } => Error::MalformedModel {
                            line: fields.line("activation"),
                            message,
                        },
                        other => other,
                    },
                )?;
                let weights = parse_floats(&fields.require("weights")?, fields.line("weights"))?;
                let ann = AnnHypothesis::new(topology, activation, weights).map_err(|e| {
                    Error::MalformedModel {
                        line: fields.line("weights"),
                        message: e.to_string(),
                    }
                })?;
                Ok(Hypothesis::Ann(ann))
            }
            "tree" => {
                let dim_line = fields.line("dim");
                let dim: usize =
                    fields
                        .require("dim")?
                        .parse()
                        .map_err(|_| Error::MalformedModel {
                            line: dim_line,
                            message: "bad dimension".into(),
                        })?;
                let structure = fields.require("structure")?;
                let centers_text = fields.require("centers")?;
                let mut centers = Vec::new();
                for part in centers_text.split('|').filter(|p| !p.is_empty()) {
                    centers.push(parse_floats(part, fields.line("centers"))?);
                }
                let radii = parse_floats(&fields.require("radii")?, fields.line("radii"))?;
                let leaves = parse_floats(&fields.require("leaves")?, fields.line("leaves"))?;
                let root = build_tree(
                    &structure,
                    &centers,
                    &radii,
                    &leaves,
                    fields.line("structure"),
                )?;
                let tree =
                    DecisionTreeHypothesis::new(root, dim).map_err(|e| Error::MalformedModel {
                        line: fields.line("structure"),
                        message: e.to_string(),
                    })?;
                Ok(Hypothesis::Tree(tree))
            }
            other => Err(Error::MalformedModel {
                line: fields.line("family"),
                message: format!("unknown family {other:?}"),
            }),
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.encode()).map_err(|source| Error::IoFailure {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Hypothesis> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| {
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
        })?;
        Hypothesis::decode(&text)
    }
}

impl From<LinearHypothesis> for Hypothesis {
    fn from(h: LinearHypothesis) -> Self {
        Hypothesis::Linear(h)
    }
}

impl From<DecisionTreeHypothesis> for Hypothesis {
    fn from(h: DecisionTreeHypothesis) -> Self {
        Hypothesis::Tree(h)
    }
}

impl From<AnnHypothesis> for Hypothesis {
    fn from(h: AnnHypothesis) -> Self {
        Hypothesis::Ann(h)
    }
}

fn join_floats(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    parts.join(",")
}

fn parse_floats(text: &str, line: usize) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            let v: f64 = s.trim().parse().map_err(|_| Error::MalformedModel {
                line,
                message: format!("bad number {s:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::MalformedModel {
                    line,
                    message: format!("non-finite number {s:?}"),
                });
            }
            Ok(v)
        })
        .collect()
}

/// Preorder flattening of a tree: node, no-subtree, yes-subtree.
#[derive(Default)]
struct FlatTree {
    structure: String,
    centers: Vec<Vec<f64>>,
    radii: Vec<f64>,
    leaves: Vec<f64>,
}

impl FlatTree {
    fn collect(&mut self, node: &TreeNode) {
        match node {
            TreeNode::Leaf { value } => {
                self.structure.push('L');
                self.leaves.push(*value);
            }
            TreeNode::Branch {
                center,
                radius,
                no,
                yes,
            } => {
                self.structure.push('B');
                self.centers.push(center.as_slice().to_vec());
                self.radii.push(*radius);
                self.collect(no);
                self.collect(yes);
            }
        }
    }
}

fn build_tree(
    structure: &str,
    centers: &[Vec<f64>],
    radii: &[f64],
    leaves: &[f64],
    line: usize,
) -> Result<TreeNode> {
    struct Cursor<'a> {
        chars: std::str::Chars<'a>,
        centers: std::slice::Iter<'a, Vec<f64>>,
        radii: std::slice::Iter<'a, f64>,
        leaves: std::slice::Iter<'a, f64>,
        line: usize,
    }

    impl Cursor<'_> {
        fn bad(&self, message: &str) -> Error {
            Error::MalformedModel {
                line: self.line,
                message: message.to_string(),
            }
        }

        fn next_node(&mut self) -> Result<TreeNode> {
            match self.chars.next() {
                Some('L') => {
                    let value = self.leaves.next().ok_or_else(|| self.bad("too few leaves"))?;
                    Ok(TreeNode::leaf(*value))
                }
                Some('B') => {
                    let center = self
                        .centers
                        .next()
                        .ok_or_else(|| self.bad("too few centers"))?;
                    let radius = self.radii.next().ok_or_else(|| self.bad("too few radii"))?;
                    let center =
                        FeatureVector::new(center.clone()).map_err(|_| self.bad("bad center"))?;
                    let no = self.next_node()?;
                    let yes = self.next_node()?;
                    Ok(TreeNode::branch(center, *radius, no, yes))
                }
                _ => Err(self.bad("bad structure string")),
            }
        }
    }

    let mut cursor = Cursor {
        chars: structure.chars(),
        centers: centers.iter(),
        radii: radii.iter(),
        leaves: leaves.iter(),
        line,
    };
    let root = cursor.next_node()?;
    if cursor.chars.next().is_some()
        || cursor.centers.next().is_some()
        || cursor.radii.next().is_some()
        || cursor.leaves.next().is_some()
    {
        return Err(Error::MalformedModel {
            line,
            message: "trailing tree data".into(),
        });
    }
    Ok(root)
}

/// key=value lines with 1-based line numbers, `format=1` first.
struct Fields {
    entries: Vec<(usize, String, String)>,
}

impl Fields {
    fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(_, _, v)| v.as_str())
    }

    fn require(&self, key: &str) -> Result<String> {
        self.get(key)
            .map(str::to_string)
            .ok_or_else(|| Error::MalformedModel {
                line: 0,
                message: format!("missing field {key:?}"),
            })
    }

    fn line(&self, key: &str) -> usize {
        self.entries
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(l, _, _)| *l)
            .unwrap_or(0)
    }
}

fn parse_fields(text: &str) -> Result<Fields> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or(Error::MalformedModel {
            line,
            message: "expected key=value".into(),
        })?;
        entries.push((line, key.to_string(), value.to_string()));
    }
    let fields = Fields { entries };
    match fields.get("format") {
        Some("1") => Ok(fields),
        Some(other) => Err(Error::MalformedModel {
            line: fields.line("format"),
            message: format!("unsupported format {other:?}"),
        }),
        None => Err(Error::MalformedModel {
            line: 1,
            message: "missing format line".into(),
        }),
    }
}
