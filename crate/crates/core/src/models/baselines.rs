use serde::{Deserialize, Serialize};

use super::{DecisionModel, Memory, ModelError, ModelStep, TrialView, ValueModel};
use crate::game::TrialRecord;

/// Hotel acceptance rate of the original training set.
pub const EWG_ACCEPT_RATE: f64 = 0.72;

/// Accepts with a fixed probability regardless of the state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ewg {
    pub p: f64,
}

impl Default for Ewg {
    fn default() -> Self {
        Ewg { p: EWG_ACCEPT_RATE }
    }
}

impl DecisionModel for Ewg {
    fn name(&self) -> &str {
        "dmm.ewg"
    }

    fn step(&self, _view: &TrialView<'_>, _memory: &Memory) -> ModelStep {
        ModelStep::stateless(self.p)
    }
}

/// Accepts iff at least half of the previous hotels were accepted, so the
/// first trial is an accept.
#[derive(Debug, Clone, Copy, Default)]
pub struct PreviousDecisions;

impl PreviousDecisions {
    pub fn accepts(accepts: u32, trials: u32) -> bool {
        2 * accepts >= trials
    }
}

impl DecisionModel for PreviousDecisions {
    fn name(&self) -> &str {
        "dmm.pd"
    }

    fn step(&self, view: &TrialView<'_>, _memory: &Memory) -> ModelStep {
        let h = view.history;
        ModelStep::stateless(if Self::accepts(h.accepts, h.trials) { 1.0 } else { 0.0 })
    }
}

/// Assumes every remaining hotel is accepted.
#[derive(Debug, Clone, Copy, Default)]
pub struct MaxFuture;

impl ValueModel for MaxFuture {
    fn name(&self) -> &str {
        "vm.mfo"
    }

    fn step(&self, view: &TrialView<'_>, _memory: &Memory) -> ModelStep {
        ModelStep::stateless(view.remaining() as f64)
    }
}

/// Past acceptance rate times the remaining trials; the first trial falls
/// back to `prior`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryProportion {
    pub prior: f64,
}

impl Default for HistoryProportion {
    fn default() -> Self {
        HistoryProportion { prior: EWG_ACCEPT_RATE }
    }
}

impl ValueModel for HistoryProportion {
    fn name(&self) -> &str {
        "vm.hp"
    }

    fn step(&self, view: &TrialView<'_>, _memory: &Memory) -> ModelStep {
        let rate = view.history.acceptance_rate().unwrap_or(self.prior);
        ModelStep::stateless(rate * view.remaining() as f64)
    }
}

/// Per-trial mean of the expert's future payoff in a set of training games.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AverageValue {
    /// `table[t - 1]` is the mean future payoff from one-based trial `t`.
    pub table: Vec<f64>,
}

impl AverageValue {
    /// Games may be of different lengths; each trial averages over the games
    /// that reached it.
    pub fn from_games<'a, I>(games: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = &'a [TrialRecord]>,
    {
        let mut sums: Vec<f64> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for game in games {
            let mut future = 0.0;
            for (i, rec) in game.iter().enumerate().rev() {
                future += f64::from(rec.expert_payoff);
                if sums.len() <= i {
                    sums.resize(i + 1, 0.0);
                    counts.resize(i + 1, 0);
                }
                sums[i] += future;
                counts[i] += 1;
            }
        }
        if sums.is_empty() {
            return Err(ModelError::EmptyTrainingSet("average-value table".into()));
        }
        let table = sums
            .iter()
            .zip(&counts)
            .map(|(s, &c)| if c == 0 { 0.0 } else { s / c as f64 })
            .collect();
        Ok(AverageValue { table })
    }
}

impl ValueModel for AverageValue {
    fn name(&self) -> &str {
        "vm.av"
    }

    fn step(&self, view: &TrialView<'_>, _memory: &Memory) -> ModelStep {
        let v = self.table.get(view.trial.saturating_sub(1)).copied().unwrap_or(0.0);
        ModelStep::stateless(v.clamp(0.0, view.remaining() as f64))
    }
}
