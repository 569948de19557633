//! Decision-maker models (DMM), value models (VM), their baselines, and the
//! simulated decision-makers used in tournaments.
//!
//! Models see a trial through a [`TrialView`] and carry an opaque [`Memory`]
//! across trials, so recurrent networks advance one step per trial instead of
//! re-reading the whole history. Stateless models keep an empty memory.

mod baselines;
mod learned;
pub mod registry;
mod simulated;
pub mod store;

use crate::game::{GameState, HistorySummary, Hotel};

pub use baselines::{AverageValue, Ewg, HistoryProportion, MaxFuture, PreviousDecisions, EWG_ACCEPT_RATE};
pub use learned::{LinearDmm, LinearVm, RecurrentDmm, RecurrentVm};
pub use registry::{ModelRegistry, RegistryManifest};
pub use simulated::{effective_probability, DecisionMaker, SimulatedDm};
pub use store::{ModelError, ModelFile, ModelKind, ModelRole, MODEL_FORMAT, MODEL_VERSION};

/// Recurrent state carried between trials.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Memory(pub Vec<f64>);

impl Memory {
    pub fn empty() -> Self {
        Memory(Vec::new())
    }
}

/// What a model sees: the history so far and the candidate review of the
/// current hotel.
#[derive(Debug, Clone, Copy)]
pub struct TrialView<'a> {
    pub history: &'a HistorySummary,
    /// One-based.
    pub trial: usize,
    pub horizon: usize,
    pub hotel: &'a Hotel,
    pub review: usize,
}

impl<'a> TrialView<'a> {
    pub fn new(state: &'a GameState, hotel: &'a Hotel, review: usize) -> Self {
        TrialView {
            history: state.summary(),
            trial: state.current_trial(),
            horizon: state.horizon(),
            hotel,
            review,
        }
    }

    /// Trials left including the current one.
    pub fn remaining(&self) -> usize {
        (self.horizon + 1).saturating_sub(self.trial)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelStep {
    pub value: f64,
    /// Memory after this trial, whatever the decision.
    pub memory: Memory,
}

impl ModelStep {
    pub fn stateless(value: f64) -> Self {
        ModelStep {
            value,
            memory: Memory::empty(),
        }
    }
}

pub trait DecisionModel: Send + Sync {
    fn name(&self) -> &str;

    /// Acceptance probability in `[0, 1]` and the memory after the trial.
    fn step(&self, view: &TrialView<'_>, memory: &Memory) -> ModelStep;

    fn accept_probability(&self, view: &TrialView<'_>, memory: &Memory) -> f64 {
        self.step(view, memory).value
    }
}

pub trait ValueModel: Send + Sync {
    fn name(&self) -> &str;

    /// Predicted future expert payoff from this trial on, within
    /// `[0, view.remaining()]`, and the memory after the trial.
    fn step(&self, view: &TrialView<'_>, memory: &Memory) -> ModelStep;

    fn future_payoff(&self, view: &TrialView<'_>, memory: &Memory) -> f64 {
        self.step(view, memory).value
    }
}

/// A decision model given by a function of the view; handy for oracles.
pub struct FnDecisionModel<F> {
    name: String,
    f: F,
}

impl<F> FnDecisionModel<F>
where
    F: Fn(&TrialView<'_>) -> f64 + Send + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnDecisionModel { name: name.into(), f }
    }
}

impl<F> DecisionModel for FnDecisionModel<F>
where
    F: Fn(&TrialView<'_>) -> f64 + Send + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn step(&self, view: &TrialView<'_>, _memory: &Memory) -> ModelStep {
        ModelStep::stateless((self.f)(view).clamp(0.0, 1.0))
    }
}

/// A value model given by a function of the view.
pub struct FnValueModel<F> {
    name: String,
    f: F,
}

impl<F> FnValueModel<F>
where
    F: Fn(&TrialView<'_>) -> f64 + Send + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnValueModel { name: name.into(), f }
    }
}

impl<F> ValueModel for FnValueModel<F>
where
    F: Fn(&TrialView<'_>) -> f64 + Send + Sync,
{
    fn name(&self) -> &str {
        &self.name
    }

    fn step(&self, view: &TrialView<'_>, _memory: &Memory) -> ModelStep {
        ModelStep::stateless((self.f)(view).clamp(0.0, view.remaining() as f64))
    }
}

/// Follows one model through a game, one trial at a time.
#[derive(Debug, Clone, Default)]
pub struct Tracker {
    memory: Memory,
}

impl Tracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn memory(&self) -> &Memory {
        &self.memory
    }

    pub fn observe_dmm(&mut self, model: &dyn DecisionModel, view: &TrialView<'_>) {
        self.memory = model.step(view, &self.memory).memory;
    }

    pub fn observe_vm(&mut self, model: &dyn ValueModel, view: &TrialView<'_>) {
        self.memory = model.step(view, &self.memory).memory;
    }
}
