//! Linear predictors h(x) = w.x parametrized by their weight vector.

use crate::data::FeatureVector;
use crate::error::{Error, Result};
use crate::math::dot;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearHypothesis {
    weights: FeatureVector,
}

impl LinearHypothesis {
    pub fn new(weights: FeatureVector) -> Self {
        Self { weights }
    }

    pub fn weights(&self) -> &FeatureVector {
        &self.weights
    }

    pub fn input_dim(&self) -> usize {
        self.weights.len()
    }

    /// w.x, accumulated left to right.
    pub fn predict(&self, x: &FeatureVector) -> Result<f64> {
        self.check_dim(x)?;
        Ok(dot(self.weights.as_slice(), x.as_slice()))
    }

    /// Gradient of the prediction with respect to the weights, which is x.
    pub fn weight_gradient(&self, x: &FeatureVector) -> Result<FeatureVector> {
        self.check_dim(x)?;
        Ok(x.clone())
    }

    fn check_dim(&self, x: &FeatureVector) -> Result<()> {
        if x.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                found: x.len(),
            });
        }
        Ok(())
    }
}
