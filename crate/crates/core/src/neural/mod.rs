//! From-scratch differentiable models shared by the decision-maker and value
//! models: a gated recurrent network trained with Adagrad, and a linear-margin
//! model for non-sequential baselines.

pub mod adagrad;
pub mod linear;
pub mod lstm;
pub mod train;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use adagrad::Adagrad;
pub use linear::{linear_model_train, LinearConfig, LinearModel, LinearObjective};
pub use lstm::{NetShape, RecurrentNet, Trace};
pub use train::{train, Hyper, SequenceExample, TrainingConfig, TrainingReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NeuralError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("degenerate training data: {0}")]
    Degenerate(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    /// On logits; targets in {0, 1}.
    BinaryCrossEntropy,
    MeanSquaredError,
}

impl Loss {
    pub fn value(self, y: f64, target: f64) -> f64 {
        match self {
            // softplus(y) - t*y, evaluated stably.
            Loss::BinaryCrossEntropy => y.max(0.0) - target * y + (-y.abs()).exp().ln_1p(),
            Loss::MeanSquaredError => (y - target) * (y - target),
        }
    }

    pub fn derivative(self, y: f64, target: f64) -> f64 {
        match self {
            Loss::BinaryCrossEntropy => sigmoid(y) - target,
            Loss::MeanSquaredError => 2.0 * (y - target),
        }
    }
}

/// Logistic function; strictly inside (0, 1) for finite inputs of moderate size.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_is_symmetric_and_bounded() {
        for x in [-30.0, -2.0, 0.0, 1.5, 30.0] {
            let s = sigmoid(x);
            assert!(s > 0.0 && s < 1.0);
            assert!((s + sigmoid(-x) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn bce_matches_definition() {
        for (y, t) in [(0.3, 1.0), (-1.2, 0.0), (2.0, 0.0)] {
            let p = sigmoid(y);
            let naive = -(t * p.ln() + (1.0 - t) * (1.0 - p).ln());
            assert!((Loss::BinaryCrossEntropy.value(y, t) - naive).abs() < 1e-12);
        }
    }
}
