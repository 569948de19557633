//! Adagrad: per-parameter step sizes scaled by accumulated squared gradients.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Adagrad {
    pub learning_rate: f64,
    pub epsilon: f64,
    accumulators: Vec<f64>,
}

impl Adagrad {
    pub fn new(param_count: usize, learning_rate: f64, epsilon: f64) -> Self {
        Adagrad {
            learning_rate,
            epsilon,
            accumulators: vec![0.0; param_count],
        }
    }

    pub fn accumulators(&self) -> &[f64] {
        &self.accumulators
    }

    /// `acc += g^2; p -= lr * g / (sqrt(acc) + eps)`.
    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) {
        debug_assert_eq!(params.len(), self.accumulators.len());
        for ((p, &g), acc) in params.iter_mut().zip(grads).zip(self.accumulators.iter_mut()) {
            *acc += g * g;
            *p -= self.learning_rate * g / (acc.sqrt() + self.epsilon);
        }
    }
}
