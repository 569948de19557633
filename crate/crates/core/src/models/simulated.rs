use std::sync::Arc;

use rand::Rng;

use super::{DecisionModel, Memory, TrialView};
use crate::game::Decision;
use crate::rng::GameRng;

/// Acceptance probability after shifting by `alpha`.
pub fn effective_probability(p: f64, alpha: f64) -> f64 {
    (p + alpha).clamp(0.0, 1.0)
}

/// A decision-maker playing one game at a time.
pub trait DecisionMaker: Send {
    /// Decides the current trial. Must be called once per trial, in order.
    fn decide(&mut self, view: &TrialView<'_>, rng: &mut GameRng) -> Decision;

    /// Forgets the current game.
    fn reset(&mut self);
}

/// Samples decisions from a DMM whose probability is shifted by `alpha`.
pub struct SimulatedDm {
    base: Arc<dyn DecisionModel>,
    alpha: f64,
    memory: Memory,
}

impl SimulatedDm {
    pub fn new(base: Arc<dyn DecisionModel>, alpha: f64) -> Self {
        SimulatedDm {
            base,
            alpha,
            memory: Memory::empty(),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn base(&self) -> &Arc<dyn DecisionModel> {
        &self.base
    }

    /// Probability of accepting at `view` given the current memory, without
    /// advancing it.
    pub fn probability(&self, view: &TrialView<'_>) -> f64 {
        effective_probability(self.base.accept_probability(view, &self.memory), self.alpha)
    }
}

impl DecisionMaker for SimulatedDm {
    fn decide(&mut self, view: &TrialView<'_>, rng: &mut GameRng) -> Decision {
        let step = self.base.step(view, &self.memory);
        self.memory = step.memory;
        let p = effective_probability(step.value, self.alpha);
        // One uniform draw per trial keeps decisions coupled across alphas
        // when the rng streams are shared.
        let u: f64 = rng.random();
        Decision::from_accept(u < p)
    }

    fn reset(&mut self) {
        self.memory = Memory::empty();
    }
}
