//! Decision trees whose internal nodes test the Euclidean distance to a
//! center point against a radius, and whose leaves hold constant predictions.
//!
//! At every internal node the yes-branch is taken iff ||x - center|| <= r,
//! so boundary points fall inside. Every input reaches exactly one leaf.

use crate::data::FeatureVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        value: f64,
    },
    Branch {
        center: FeatureVector,
        radius: f64,
        /// Followed when ||x - center|| > radius.
        no: Box<TreeNode>,
        /// Followed when ||x - center|| <= radius.
        yes: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn leaf(value: f64) -> TreeNode {
        TreeNode::Leaf { value }
    }

    pub fn branch(center: FeatureVector, radius: f64, no: TreeNode, yes: TreeNode) -> TreeNode {
        TreeNode::Branch {
            center,
            radius,
            no: Box::new(no),
            yes: Box::new(yes),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTreeHypothesis {
    root: TreeNode,
    input_dim: usize,
}

impl DecisionTreeHypothesis {
    /// Validates that all centers share `input_dim`, radii are positive and
    /// finite, and leaf values are finite.
    pub fn new(root: TreeNode, input_dim: usize) -> Result<Self> {
        if input_dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        validate(&root, input_dim)?;
        Ok(Self { root, input_dim })
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    /// Walks the flow chart and returns the reached leaf's value.
    pub fn predict(&self, x: &FeatureVector) -> Result<f64> {
        if x.len() != self.input_dim {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim,
                found: x.len(),
            });
        }
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { value } => return Ok(*value),
                TreeNode::Branch {
                    center,
                    radius,
                    no,
                    yes,
                } => {
                    node = if euclidean_distance(x.as_slice(), center.as_slice()) <= *radius {
                        yes
                    } else {
                        no
                    };
                }
            }
        }
    }
}

fn validate(node: &TreeNode, input_dim: usize) -> Result<()> {
    match node {
        TreeNode::Leaf { value } => {
            if !value.is_finite() {
                return Err(Error::NonFiniteInput);
            }
            Ok(())
        }
        TreeNode::Branch {
            center,
            radius,
            no,
            yes,
        } => {
            if center.len() != input_dim {
                return Err(Error::DimensionMismatch {
                    expected: input_dim,
                    found: center.len(),
                });
            }
            if !radius.is_finite() || *radius <= 0.0 {
                return Err(Error::NonFiniteInput);
            }
            validate(no, input_dim)?;
            validate(yes, input_dim)
        }
    }
}

fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(values: &[f64]) -> FeatureVector {
        FeatureVector::from_slice(values).unwrap()
    }

    /// Two nested radius tests: outside ball(u) -> 10, in ball(u) but not
    /// ball(v) -> 20, in both -> 30.
    fn two_ball_tree() -> DecisionTreeHypothesis {
        let inner = TreeNode::branch(fv(&[2.0, 0.0]), 1.0, TreeNode::leaf(20.0), TreeNode::leaf(30.0));
        let root = TreeNode::branch(fv(&[0.0, 0.0]), 1.0, TreeNode::leaf(10.0), inner);
        DecisionTreeHypothesis::new(root, 2).unwrap()
    }

    #[test]
    fn point_outside_first_ball_takes_no_branch() {
        let t = two_ball_tree();
        assert_eq!(t.predict(&fv(&[3.0, 0.0])).unwrap(), 10.0);
    }

    #[test]
    fn point_in_first_ball_only_takes_yes_no_path() {
        let t = two_ball_tree();
        assert_eq!(t.predict(&fv(&[0.0, 0.0])).unwrap(), 20.0);
    }

    #[test]
    fn boundary_point_counts_as_inside_both_balls() {
        // (1,0) is at distance exactly 1 from both centers.
        let t = two_ball_tree();
        assert_eq!(t.predict(&fv(&[1.0, 0.0])).unwrap(), 30.0);
    }

    #[test]
    fn every_grid_point_reaches_exactly_one_leaf() {
        let t = two_ball_tree();
        let leaf_values = [10.0, 20.0, 30.0];
        let mut seen = [false; 3];
        for i in -30..=30 {
            for j in -30..=30 {
                let x = fv(&[i as f64 * 0.1, j as f64 * 0.1]);
                let v = t.predict(&x).unwrap();
                let k = leaf_values.iter().position(|&l| l == v).expect("unknown leaf value");
                seen[k] = true;
            }
        }
        assert_eq!(seen, [true, true, true], "grid misses a region");
    }

    #[test]
    fn invalid_trees_are_rejected() {
        let zero_radius = TreeNode::branch(fv(&[0.0]), 0.0, TreeNode::leaf(1.0), TreeNode::leaf(2.0));
        assert!(DecisionTreeHypothesis::new(zero_radius, 1).is_err());

        let wrong_dim = TreeNode::branch(fv(&[0.0, 0.0]), 1.0, TreeNode::leaf(1.0), TreeNode::leaf(2.0));
        assert!(matches!(
            DecisionTreeHypothesis::new(wrong_dim, 1).unwrap_err(),
            Error::DimensionMismatch { .. }
        ));
    }

    #[test]
    fn predict_checks_input_dimension() {
        let t = two_ball_tree();
        assert!(matches!(
            t.predict(&fv(&[1.0])).unwrap_err(),
            Error::DimensionMismatch { expected: 2, found: 1 }
        ));
    }
}
