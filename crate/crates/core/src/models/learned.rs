use std::sync::Arc;

use super::{DecisionModel, Memory, ModelStep, TrialView, ValueModel};
use crate::features::FeatureEncoder;
use crate::neural::{sigmoid, LinearModel, RecurrentNet};

fn encode(encoder: &FeatureEncoder, view: &TrialView<'_>) -> Vec<f64> {
    encoder.encode(view.history, view.trial, view.horizon, view.hotel, view.review)
}

fn recurrent_step(net: &RecurrentNet, encoder: &FeatureEncoder, view: &TrialView<'_>, memory: &Memory) -> (f64, Memory) {
    let x = encode(encoder, view);
    let (y, m) = if memory.0.is_empty() {
        net.step(&vec![0.0; net.memory_len()], &x)
    } else {
        net.step(&memory.0, &x)
    };
    (y, Memory(m))
}

/// Gated recurrent DMM; the network output is a logit.
pub struct RecurrentDmm {
    name: String,
    net: RecurrentNet,
    encoder: Arc<FeatureEncoder>,
}

impl RecurrentDmm {
    pub fn new(name: impl Into<String>, net: RecurrentNet, encoder: Arc<FeatureEncoder>) -> Self {
        assert_eq!(net.shape().input_dim(), encoder.dim(), "network and encoder disagree on input size");
        RecurrentDmm { name: name.into(), net, encoder }
    }

    pub fn net(&self) -> &RecurrentNet {
        &self.net
    }
}

impl DecisionModel for RecurrentDmm {
    fn name(&self) -> &str {
        &self.name
    }

    fn step(&self, view: &TrialView<'_>, memory: &Memory) -> ModelStep {
        let (y, memory) = recurrent_step(&self.net, &self.encoder, view, memory);
        ModelStep { value: sigmoid(y), memory }
    }
}

/// Gated recurrent VM regressing the future payoff.
pub struct RecurrentVm {
    name: String,
    net: RecurrentNet,
    encoder: Arc<FeatureEncoder>,
}

impl RecurrentVm {
    pub fn new(name: impl Into<String>, net: RecurrentNet, encoder: Arc<FeatureEncoder>) -> Self {
        assert_eq!(net.shape().input_dim(), encoder.dim(), "network and encoder disagree on input size");
        RecurrentVm { name: name.into(), net, encoder }
    }

    pub fn net(&self) -> &RecurrentNet {
        &self.net
    }
}

impl ValueModel for RecurrentVm {
    fn name(&self) -> &str {
        &self.name
    }

    fn step(&self, view: &TrialView<'_>, memory: &Memory) -> ModelStep {
        let (y, memory) = recurrent_step(&self.net, &self.encoder, view, memory);
        let value = if y.is_finite() { y.clamp(0.0, view.remaining() as f64) } else { 0.0 };
        ModelStep { value, memory }
    }
}

/// Linear-margin DMM; the margin goes through a sigmoid to give a probability.
pub struct LinearDmm {
    name: String,
    model: LinearModel,
    encoder: Arc<FeatureEncoder>,
}

impl LinearDmm {
    pub fn new(name: impl Into<String>, model: LinearModel, encoder: Arc<FeatureEncoder>) -> Self {
        assert_eq!(model.dim(), encoder.dim(), "model and encoder disagree on input size");
        LinearDmm { name: name.into(), model, encoder }
    }
}

impl DecisionModel for LinearDmm {
    fn name(&self) -> &str {
        &self.name
    }

    fn step(&self, view: &TrialView<'_>, _memory: &Memory) -> ModelStep {
        ModelStep::stateless(sigmoid(self.model.predict(&encode(&self.encoder, view))))
    }
}

pub struct LinearVm {
    name: String,
    model: LinearModel,
    encoder: Arc<FeatureEncoder>,
}

impl LinearVm {
    pub fn new(name: impl Into<String>, model: LinearModel, encoder: Arc<FeatureEncoder>) -> Self {
        assert_eq!(model.dim(), encoder.dim(), "model and encoder disagree on input size");
        LinearVm { name: name.into(), model, encoder }
    }
}

impl ValueModel for LinearVm {
    fn name(&self) -> &str {
        &self.name
    }

    fn step(&self, view: &TrialView<'_>, _memory: &Memory) -> ModelStep {
        let y = self.model.predict(&encode(&self.encoder, view));
        ModelStep::stateless(if y.is_finite() { y.clamp(0.0, view.remaining() as f64) } else { 0.0 })
    }
}
