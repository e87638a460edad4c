//! Bias-free feedforward networks with a single real output.
//!
//! Every neuron computes a weighted sum of its inputs; hidden layers apply
//! the activation, the output layer does not (regression head). Weights are
//! stored flat in layer-major order: for each layer, output neurons in
//! order, and for each output neuron its input weights in order. For the
//! default [2, 3, 1] topology this is exactly the order w1..w9 used when the
//! net is drawn edge by edge: w1, w2 feed hidden neuron 1, w3, w4 neuron 2,
//! w5, w6 neuron 3, and w7, w8, w9 collect the hidden activations.
//! Weight gradients come back in the same flat order.

use super::Activation;
use crate::data::FeatureVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct AnnHypothesis {
    topology: Vec<usize>,
    activation: Activation,
    weights: Vec<f64>,
}

impl AnnHypothesis {
    /// Builds a network from a flat weight vector.
    ///
    /// The topology must list at least input and output layer, every layer
    /// size must be >= 1, the output layer must have size 1, and the weight
    /// count must match the sum of layer products.
    pub fn new(topology: Vec<usize>, activation: Activation, weights: Vec<f64>) -> Result<Self> {
        if topology.len() < 2 || topology.contains(&0) || *topology.last().unwrap() != 1 {
            return Err(Error::InvalidConfig(format!(
                "invalid topology {topology:?}: need >= 2 layers, all sizes >= 1, output size 1"
            )));
        }
        let expected = Self::weight_count(&topology);
        if weights.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: weights.len(),
            });
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(Self {
            topology,
            activation,
            weights,
        })
    }

    /// The paper-sized default: 2 inputs, 3 hidden neurons, 1 output.
    pub fn default_topology() -> Vec<usize> {
        vec![2, 3, 1]
    }

    /// Number of scalar weights a topology requires.
    pub fn weight_count(topology: &[usize]) -> usize {
        topology.windows(2).map(|w| w[0] * w[1]).sum()
    }

    pub fn topology(&self) -> &[usize] {
        &self.topology
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn input_dim(&self) -> usize {
        self.topology[0]
    }

    /// Forward pass: weighted sums layer by layer, activation on hidden
    /// layers only.
    pub fn forward(&self, x: &FeatureVector) -> Result<f64> {
        let trace = self.forward_trace(x)?;
        Ok(trace.output())
    }

    /// Gradient of the output with respect to every weight, flat, in the
    /// storage order documented above. At ReLU's kink (z = 0) the one-sided
    /// derivative 0 is used.
    pub fn weight_gradient(&self, x: &FeatureVector) -> Result<Vec<f64>> {
        let trace = self.forward_trace(x)?;
        let n_layers = self.topology.len() - 1;
        let mut grad = vec![0.0; self.weights.len()];

        // d(output)/d(z) for the current layer, starting at the output
        // neuron, which is the raw last weighted sum.
        let mut delta = vec![1.0];
        for layer in (0..n_layers).rev() {
            let in_size = self.topology[layer];
            let offset = self.layer_offset(layer);
            let inputs = &trace.activations[layer];
            debug_assert_eq!(delta.len(), self.topology[layer + 1]);

            for (out, d) in delta.iter().enumerate() {
                let base = offset + out * in_size;
                for (i, input) in inputs.iter().enumerate() {
                    grad[base + i] = d * input;
                }
            }
            if layer == 0 {
                break;
            }
            // Pull delta through the weights and the previous activation.
            let mut prev = vec![0.0; in_size];
            for (i, p) in prev.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (out, d) in delta.iter().enumerate() {
                    acc += self.weights[offset + out * in_size + i] * d;
                }
                *p = acc * self.activation.derivative(trace.pre_activations[layer - 1][i]);
            }
            delta = prev;
        }
        Ok(grad)
    }

    fn layer_offset(&self, layer: usize) -> usize {
        self.topology
            .windows(2)
            .take(layer)
            .map(|w| w[0] * w[1])
            .sum()
    }

    fn forward_trace(&self, x: &FeatureVector) -> Result<Trace> {
        if x.len() != self.topology[0] {
            return Err(Error::DimensionMismatch {
                expected: self.topology[0],
                found: x.len(),
            });
        }
        let n_layers = self.topology.len() - 1;
        let mut activations = Vec::with_capacity(n_layers + 1);
        let mut pre_activations = Vec::with_capacity(n_layers);
        activations.push(x.as_slice().to_vec());

        for layer in 0..n_layers {
            let in_size = self.topology[layer];
            let out_size = self.topology[layer + 1];
            let offset = self.layer_offset(layer);
            let inputs = &activations[layer];
            let mut z = vec![0.0; out_size];
            for (out, zj) in z.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (i, input) in inputs.iter().enumerate() {
                    acc += self.weights[offset + out * in_size + i] * input;
                }
                *zj = acc;
            }
            let a = if layer + 1 < n_layers {
                z.iter().map(|&v| self.activation.apply(v)).collect()
            } else {
                z.clone()
            };
            pre_activations.push(z);
            activations.push(a);
        }
        Ok(Trace {
            activations,
            pre_activations,
        })
    }
}

struct Trace {
    /// activations[0] is the input; activations[k+1] the output of layer k.
    activations: Vec<Vec<f64>>,
    /// Weighted sums per layer, before activation.
    pre_activations: Vec<Vec<f64>>,
}

impl Trace {
    fn output(&self) -> f64 {
        self.activations.last().unwrap()[0]
    }
}
