//! Response and request bodies. Nothing sent before the debrief carries a
//! review score, a hotel score or anything about hotels not yet played.

use persuasion::game::{Decision, Review, TrialRecord};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    AwaitingDecision,
    Finished,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Choice {
    Accept,
    Reject,
}

impl From<Choice> for Decision {
    fn from(c: Choice) -> Self {
        match c {
            Choice::Accept => Decision::Accept,
            Choice::Reject => Decision::Reject,
        }
    }
}

impl From<Decision> for Choice {
    fn from(d: Decision) -> Self {
        match d {
            Decision::Accept => Choice::Accept,
            Decision::Reject => Choice::Reject,
        }
    }
}

/// A review as the DM sees it: text only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewText {
    pub review_id: String,
    pub positive_text: String,
    pub negative_text: String,
}

impl From<&Review> for ReviewText {
    fn from(r: &Review) -> Self {
        ReviewText {
            review_id: r.id.clone(),
            positive_text: r.positive_text.clone(),
            negative_text: r.negative_text.clone(),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    /// Defaults to the service's configured expert.
    pub expert: Option<String>,
    /// Fixes the hotel order and the lotteries.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmitDecision {
    /// One-based trial the decision is for; retries of a trial already
    /// decided return the stored outcome.
    pub trial: usize,
    pub decision: Choice,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryRow {
    pub trial: usize,
    pub review: ReviewText,
    pub decision: Choice,
    /// Absent on rejected trials when lottery results are hidden.
    pub lottery_result: Option<f64>,
    pub dm_payoff: f64,
    pub expert_payoff: u8,
}

impl HistoryRow {
    pub fn new(record: &TrialRecord, review: &Review, lottery_visible: bool) -> Self {
        let shown = lottery_visible || record.decision.is_accept();
        HistoryRow {
            trial: record.trial_index,
            review: review.into(),
            decision: record.decision.into(),
            lottery_result: shown.then_some(record.lottery_result),
            dm_payoff: record.dm_payoff,
            expert_payoff: record.expert_payoff,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub expert_payoff: u32,
    pub dm_payoff: f64,
}

/// Everything the DM may see about a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub session_id: String,
    pub expert: String,
    pub status: Status,
    pub horizon: usize,
    /// Trial awaiting a decision; `None` once finished.
    pub trial: Option<usize>,
    pub current_review: Option<ReviewText>,
    pub lottery_visible: bool,
    pub history: Vec<HistoryRow>,
    pub totals: Totals,
}

/// Result of one decision, with the next review when the game goes on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub session_id: String,
    pub result: HistoryRow,
    pub totals: Totals,
    pub status: Status,
    pub next_trial: Option<usize>,
    pub next_review: Option<ReviewText>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DebriefReview {
    pub review_id: String,
    pub score: f64,
    pub revealed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DebriefTrial {
    pub trial: usize,
    pub hotel_id: String,
    pub hotel_score: f64,
    pub reviews: Vec<DebriefReview>,
    pub decision: Choice,
    pub lottery_result: f64,
    pub dm_payoff: f64,
    pub expert_payoff: u8,
}

/// Full reveal after the last trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Debrief {
    pub session_id: String,
    pub expert: String,
    pub trials: Vec<DebriefTrial>,
    pub totals: Totals,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
}
