//! Game entities, the per-trial transition and payoff rules, and replay.
//!
//! A game is a sequence of trials (ten by default). In each trial the expert
//! reveals one review of the current hotel, the decision-maker accepts or
//! rejects, and a lottery draws one of the hotel's review scores. The lottery
//! is drawn on every trial, including rejections, so the counterfactual payoff
//! of a rejected hotel is always known.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Reviews per hotel in a regular game.
pub const REVIEWS_PER_HOTEL: usize = 7;
/// Trials per game in a regular game.
pub const DEFAULT_HORIZON: usize = 10;
/// Subtracted from the lottery result to obtain the decision-maker's payoff.
pub const PAYOFF_OFFSET: f64 = 8.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("review {review} does not belong to hotel {hotel}")]
    ReviewNotInHotel { hotel: String, review: String },
    #[error("hotel {hotel} has {found} reviews, expected {expected}")]
    WrongReviewCount {
        hotel: String,
        found: usize,
        expected: usize,
    },
    #[error("review {review} has score {score}, outside [0, 10]")]
    ScoreOutOfRange { review: String, score: f64 },
    #[error("trial {got} submitted while trial {expected} is current")]
    TrialOutOfOrder { expected: usize, got: usize },
    #[error("the game is already finished")]
    GameFinished,
    #[error("trial {trial} plays hotel {got} but the sequence has {expected}")]
    HotelMismatch {
        trial: usize,
        expected: String,
        got: String,
    },
    #[error("invalid trial record: {0}")]
    InvalidRecord(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Accept,
    Reject,
}

impl Decision {
    pub fn is_accept(self) -> bool {
        matches!(self, Decision::Accept)
    }

    pub fn from_accept(accept: bool) -> Self {
        if accept {
            Decision::Accept
        } else {
            Decision::Reject
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Review {
    pub id: String,
    pub score: f64,
    pub positive_text: String,
    pub negative_text: String,
}

impl Review {
    pub fn new(
        id: impl Into<String>,
        score: f64,
        positive_text: impl Into<String>,
        negative_text: impl Into<String>,
    ) -> Result<Self, GameError> {
        let id = id.into();
        if !score.is_finite() || !(0.0..=10.0).contains(&score) {
            return Err(GameError::ScoreOutOfRange { review: id, score });
        }
        Ok(Review {
            id,
            score,
            positive_text: positive_text.into(),
            negative_text: negative_text.into(),
        })
    }

    /// Characters in both parts together.
    pub fn text_len(&self) -> usize {
        self.positive_text.chars().count() + self.negative_text.chars().count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HotelRepr", into = "HotelRepr")]
pub struct Hotel {
    id: String,
    reviews: Vec<Review>,
    avg_score: f64,
}

#[derive(Serialize, Deserialize)]
struct HotelRepr {
    id: String,
    reviews: Vec<Review>,
}

impl TryFrom<HotelRepr> for Hotel {
    type Error = GameError;

    fn try_from(r: HotelRepr) -> Result<Self, GameError> {
        Hotel::new(r.id, r.reviews)
    }
}

impl From<Hotel> for HotelRepr {
    fn from(h: Hotel) -> Self {
        HotelRepr {
            id: h.id,
            reviews: h.reviews,
        }
    }
}

impl Hotel {
    /// A regular hotel with exactly seven reviews.
    pub fn new(id: impl Into<String>, reviews: Vec<Review>) -> Result<Self, GameError> {
        let id = id.into();
        if reviews.len() != REVIEWS_PER_HOTEL {
            return Err(GameError::WrongReviewCount {
                hotel: id,
                found: reviews.len(),
                expected: REVIEWS_PER_HOTEL,
            });
        }
        Self::fixture(id, reviews)
    }

    /// A hotel with any non-zero number of reviews. Only small test fixtures
    /// (brute-force oracles, degenerate hotels) should need this.
    pub fn fixture(id: impl Into<String>, reviews: Vec<Review>) -> Result<Self, GameError> {
        let id = id.into();
        if reviews.is_empty() {
            return Err(GameError::WrongReviewCount {
                hotel: id,
                found: 0,
                expected: REVIEWS_PER_HOTEL,
            });
        }
        for r in &reviews {
            if !r.score.is_finite() || !(0.0..=10.0).contains(&r.score) {
                return Err(GameError::ScoreOutOfRange {
                    review: r.id.clone(),
                    score: r.score,
                });
            }
        }
        let avg_score = mean_score(&reviews);
        Ok(Hotel {
            id,
            reviews,
            avg_score,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn reviews(&self) -> &[Review] {
        &self.reviews
    }

    pub fn review(&self, index: usize) -> Option<&Review> {
        self.reviews.get(index)
    }

    pub fn len(&self) -> usize {
        self.reviews.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reviews.is_empty()
    }

    pub fn avg_score(&self) -> f64 {
        self.avg_score
    }

    pub fn review_index(&self, review_id: &str) -> Option<usize> {
        self.reviews.iter().position(|r| r.id == review_id)
    }

    pub fn scores(&self) -> impl Iterator<Item = f64> + '_ {
        self.reviews.iter().map(|r| r.score)
    }

    /// Review indices ordered by score descending, ties broken by lower index.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.reviews.len()).collect();
        order.sort_by(|&a, &b| {
            self.reviews[b]
                .score
                .total_cmp(&self.reviews[a].score)
                .then(a.cmp(&b))
        });
        order
    }

    /// Zero-based rank of review `index` under [`Hotel::ranking`].
    pub fn rank_of(&self, index: usize) -> usize {
        let s = self.reviews[index].score;
        self.reviews
            .iter()
            .enumerate()
            .filter(|&(j, r)| r.score > s || (r.score == s && j < index))
            .count()
    }
}

fn mean_score(reviews: &[Review]) -> f64 {
    reviews.iter().map(|r| r.score).sum::<f64>() / reviews.len() as f64
}

/// Expected payoff of a decision-maker who accepts `hotel`.
pub fn expected_dm_payoff(hotel: &Hotel) -> f64 {
    hotel.avg_score() - PAYOFF_OFFSET
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    /// One-based.
    pub trial_index: usize,
    pub hotel_id: String,
    pub revealed_review_id: String,
    pub decision: Decision,
    pub lottery_result: f64,
    /// Realised payoff: `lottery_result - 8` on accept, `0` on reject.
    pub dm_payoff: f64,
    pub expert_payoff: u8,
    /// `lottery_result - 8` whatever the decision.
    pub counterfactual_payoff: f64,
    /// Average review score of the trial's hotel.
    pub hotel_score: f64,
    /// Score attached to the revealed review.
    pub revealed_score: f64,
}

impl TrialRecord {
    /// Builds a record whose payoffs follow from `decision` and `lottery_result`.
    pub fn new(
        trial_index: usize,
        hotel: &Hotel,
        review_index: usize,
        decision: Decision,
        lottery_result: f64,
    ) -> Result<Self, GameError> {
        let review = hotel
            .review(review_index)
            .ok_or_else(|| GameError::ReviewNotInHotel {
                hotel: hotel.id().to_string(),
                review: format!("#{review_index}"),
            })?;
        let counterfactual_payoff = lottery_result - PAYOFF_OFFSET;
        let (dm_payoff, expert_payoff) = match decision {
            Decision::Accept => (counterfactual_payoff, 1),
            Decision::Reject => (0.0, 0),
        };
        Ok(TrialRecord {
            trial_index,
            hotel_id: hotel.id().to_string(),
            revealed_review_id: review.id.clone(),
            decision,
            lottery_result,
            dm_payoff,
            expert_payoff,
            counterfactual_payoff,
            hotel_score: hotel.avg_score(),
            revealed_score: review.score,
        })
    }

    /// Checks the payoff rules; with `hotel` also checks that the lottery and
    /// revealed review come from it.
    pub fn validate(&self, hotel: Option<&Hotel>) -> Result<(), GameError> {
        let bad = |m: String| Err(GameError::InvalidRecord(m));
        if self.trial_index == 0 {
            return bad("trial_index is one-based".into());
        }
        if !(0.0..=10.0).contains(&self.lottery_result) {
            return bad(format!("lottery result {} outside [0, 10]", self.lottery_result));
        }
        let cf = self.lottery_result - PAYOFF_OFFSET;
        if self.counterfactual_payoff != cf {
            return bad(format!(
                "counterfactual payoff {} != lottery - 8 = {cf}",
                self.counterfactual_payoff
            ));
        }
        let expected = match self.decision {
            Decision::Accept => (cf, 1),
            Decision::Reject => (0.0, 0),
        };
        if self.dm_payoff != expected.0 || self.expert_payoff != expected.1 {
            return bad(format!(
                "payoffs ({}, {}) inconsistent with decision {:?}",
                self.dm_payoff, self.expert_payoff, self.decision
            ));
        }
        if let Some(h) = hotel {
            if h.id() != self.hotel_id {
                return bad(format!("record hotel {} is not {}", self.hotel_id, h.id()));
            }
            let Some(idx) = h.review_index(&self.revealed_review_id) else {
                return Err(GameError::ReviewNotInHotel {
                    hotel: h.id().to_string(),
                    review: self.revealed_review_id.clone(),
                });
            };
            if !h.scores().any(|s| s == self.lottery_result) {
                return bad(format!(
                    "lottery result {} is not a score of hotel {}",
                    self.lottery_result,
                    h.id()
                ));
            }
            if h.reviews()[idx].score != self.revealed_score {
                return bad("revealed_score differs from the review's score".into());
            }
            if (h.avg_score() - self.hotel_score).abs() > 1e-12 {
                return bad("hotel_score differs from the hotel's average".into());
            }
        }
        Ok(())
    }
}

/// Plays one trial: draws the lottery uniformly from the hotel's scores and
/// settles both payoffs. The lottery is drawn whatever the decision.
pub fn resolve_trial<R: Rng + ?Sized>(
    trial_index: usize,
    hotel: &Hotel,
    review_index: usize,
    decision: Decision,
    rng: &mut R,
) -> Result<TrialRecord, GameError> {
    if review_index >= hotel.len() {
        return Err(GameError::ReviewNotInHotel {
            hotel: hotel.id().to_string(),
            review: format!("#{review_index}"),
        });
    }
    let lottery_index = rng.random_range(0..hotel.len());
    TrialRecord::new(
        trial_index,
        hotel,
        review_index,
        decision,
        hotel.reviews()[lottery_index].score,
    )
}

/// Same as [`resolve_trial`] with the revealed review given by id.
pub fn resolve_trial_by_id<R: Rng + ?Sized>(
    trial_index: usize,
    hotel: &Hotel,
    review_id: &str,
    decision: Decision,
    rng: &mut R,
) -> Result<TrialRecord, GameError> {
    let idx = hotel
        .review_index(review_id)
        .ok_or_else(|| GameError::ReviewNotInHotel {
            hotel: hotel.id().to_string(),
            review: review_id.to_string(),
        })?;
    resolve_trial(trial_index, hotel, idx, decision, rng)
}

/// Running counts over completed trials; everything the statistical game
/// features and the history-driven baselines need.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct HistorySummary {
    pub trials: u32,
    pub accepts: u32,
    pub accept_earn: u32,
    pub accept_lose: u32,
    pub reject_earn: u32,
    pub reject_lose: u32,
    pub bad_hotel_accepts: u32,
    pub excellent_hotel_rejects: u32,
    pub lottery_low: u32,
    pub lottery_med: u32,
    pub lottery_high: u32,
    pub dm_payoff_sum: f64,
    pub counterfactual_sum: f64,
}

impl HistorySummary {
    pub fn push(&mut self, decision: Decision, lottery_result: f64, hotel_score: f64) {
        let cf = lottery_result - PAYOFF_OFFSET;
        self.trials += 1;
        match decision {
            Decision::Accept => {
                self.accepts += 1;
                self.accept_earn += u32::from(cf > 0.0);
                self.accept_lose += u32::from(cf < 0.0);
                self.bad_hotel_accepts += u32::from(hotel_score < 7.5);
                self.dm_payoff_sum += cf;
            }
            Decision::Reject => {
                self.reject_earn += u32::from(cf > 0.0);
                self.reject_lose += u32::from(cf < 0.0);
                self.excellent_hotel_rejects += u32::from(hotel_score > 9.5);
            }
        }
        self.lottery_low += u32::from(lottery_result < 3.0);
        self.lottery_med += u32::from((3.0..5.0).contains(&lottery_result));
        self.lottery_high += u32::from(lottery_result >= 8.0);
        self.counterfactual_sum += cf;
    }

    pub fn push_record(&mut self, r: &TrialRecord) {
        self.push(r.decision, r.lottery_result, r.hotel_score);
    }

    pub fn rejections(&self) -> u32 {
        self.trials - self.accepts
    }

    /// Fraction of completed trials accepted; `None` before the first trial.
    pub fn acceptance_rate(&self) -> Option<f64> {
        (self.trials > 0).then(|| f64::from(self.accepts) / f64::from(self.trials))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    horizon: usize,
    /// Empty when the future sequence is unknown to the holder.
    hotel_sequence: Vec<String>,
    completed: Vec<TrialRecord>,
    summary: HistorySummary,
}

impl GameState {
    /// A fresh game over a known hotel sequence; the horizon is its length.
    pub fn new(hotel_sequence: Vec<String>) -> Self {
        GameState {
            horizon: hotel_sequence.len(),
            hotel_sequence,
            completed: Vec::new(),
            summary: HistorySummary::default(),
        }
    }

    /// A fresh game whose hotel sequence is not known.
    pub fn with_horizon(horizon: usize) -> Self {
        GameState {
            horizon,
            hotel_sequence: Vec::new(),
            completed: Vec::new(),
            summary: HistorySummary::default(),
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn hotel_sequence(&self) -> &[String] {
        &self.hotel_sequence
    }

    pub fn completed(&self) -> &[TrialRecord] {
        &self.completed
    }

    pub fn summary(&self) -> &HistorySummary {
        &self.summary
    }

    /// One-based index of the trial being played; `horizon + 1` once finished.
    pub fn current_trial(&self) -> usize {
        self.completed.len() + 1
    }

    pub fn remaining_trials(&self) -> usize {
        self.horizon - self.completed.len()
    }

    pub fn is_terminal(&self) -> bool {
        self.completed.len() >= self.horizon
    }

    /// Hotel id of the current trial, when the sequence is known.
    pub fn current_hotel_id(&self) -> Option<&str> {
        self.hotel_sequence
            .get(self.completed.len())
            .map(String::as_str)
    }

    pub fn expert_payoff(&self) -> u32 {
        self.completed.iter().map(|r| u32::from(r.expert_payoff)).sum()
    }

    pub fn dm_payoff(&self) -> f64 {
        self.completed.iter().map(|r| r.dm_payoff).sum()
    }

    /// Returns the state after `record`; `self` is left untouched.
    pub fn advance(&self, record: TrialRecord) -> Result<GameState, GameError> {
        let mut next = self.clone();
        next.apply(record)?;
        Ok(next)
    }

    /// In-place form of [`GameState::advance`].
    pub fn apply(&mut self, record: TrialRecord) -> Result<(), GameError> {
        if self.is_terminal() {
            return Err(GameError::GameFinished);
        }
        let expected = self.current_trial();
        if record.trial_index != expected {
            return Err(GameError::TrialOutOfOrder {
                expected,
                got: record.trial_index,
            });
        }
        if let Some(h) = self.current_hotel_id() {
            if h != record.hotel_id {
                return Err(GameError::HotelMismatch {
                    trial: expected,
                    expected: h.to_string(),
                    got: record.hotel_id,
                });
            }
        }
        record.validate(None)?;
        self.summary.push_record(&record);
        self.completed.push(record);
        Ok(())
    }

    /// Rebuilds a game from its trial records.
    pub fn replay<'a, I>(hotel_sequence: Vec<String>, records: I) -> Result<GameState, GameError>
    where
        I: IntoIterator<Item = &'a TrialRecord>,
    {
        let mut state = GameState::new(hotel_sequence);
        for r in records {
            state.apply(r.clone())?;
        }
        Ok(state)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn hotel(id: &str, scores: &[f64]) -> Hotel {
        let reviews = scores
            .iter()
            .enumerate()
            .map(|(i, &s)| Review::new(format!("{id}-r{i}"), s, "", "").unwrap())
            .collect();
        Hotel::fixture(id, reviews).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::hotel;
    use super::*;
    use crate::rng::seeded;
    use approx::assert_relative_eq;

    #[test]
    fn accept_pays_lottery_minus_eight() {
        let h = hotel("h", &[9.1; 7]);
        let r = resolve_trial(1, &h, 0, Decision::Accept, &mut seeded(1)).unwrap();
        assert_eq!(r.lottery_result, 9.1);
        assert_relative_eq!(r.dm_payoff, 1.1, epsilon = 1e-12);
        assert_eq!(r.expert_payoff, 1);
    }

    #[test]
    fn reject_zeroes_both_payoffs() {
        let h = hotel("h", &[3.0, 5.0, 7.0, 8.0, 9.0, 9.0, 10.0]);
        let mut rng = seeded(3);
        for _ in 0..50 {
            let r = resolve_trial(1, &h, 2, Decision::Reject, &mut rng).unwrap();
            assert_eq!(r.dm_payoff, 0.0);
            assert_eq!(r.expert_payoff, 0);
            assert_eq!(r.counterfactual_payoff, r.lottery_result - 8.0);
        }
    }

    #[test]
    fn calibration_hotel_pays_zero() {
        let h = hotel("h", &[8.0; 7]);
        let mut rng = seeded(9);
        for _ in 0..100 {
            let r = resolve_trial(1, &h, 0, Decision::Accept, &mut rng).unwrap();
            assert_eq!(r.dm_payoff, 0.0);
        }
        assert_eq!(expected_dm_payoff(&h), 0.0);
    }

    #[test]
    fn expected_payoff_examples() {
        assert_eq!(expected_dm_payoff(&hotel("a", &[10.0; 7])), 2.0);
        let h = hotel("b", &[3.0, 5.0, 7.0, 8.0, 9.0, 9.0, 10.0]);
        let oracle = [3.0, 5.0, 7.0, 8.0, 9.0, 9.0, 10.0].iter().sum::<f64>() / 7.0 - 8.0;
        assert_relative_eq!(expected_dm_payoff(&h), oracle, epsilon = 1e-12);
        assert_relative_eq!(expected_dm_payoff(&h), -0.714_285_7, epsilon = 1e-7);
    }

    #[test]
    fn review_outside_hotel_is_rejected() {
        let h = hotel("h", &[5.0; 7]);
        assert!(matches!(
            resolve_trial(1, &h, 7, Decision::Accept, &mut seeded(0)),
            Err(GameError::ReviewNotInHotel { .. })
        ));
        assert!(resolve_trial_by_id(1, &h, "nope", Decision::Accept, &mut seeded(0)).is_err());
        assert!(resolve_trial_by_id(1, &h, "h-r3", Decision::Accept, &mut seeded(0)).is_ok());
    }

    #[test]
    fn regular_hotels_need_seven_reviews() {
        let reviews = vec![Review::new("x", 5.0, "", "").unwrap()];
        assert!(matches!(
            Hotel::new("h", reviews),
            Err(GameError::WrongReviewCount { found: 1, .. })
        ));
        assert!(Review::new("x", 11.0, "", "").is_err());
        assert!(Review::new("x", f64::NAN, "", "").is_err());
    }

    #[test]
    fn ranking_breaks_ties_by_index() {
        let h = hotel("h", &[5.0, 9.0, 5.0, 9.0, 1.0, 7.0, 5.0]);
        assert_eq!(h.ranking(), vec![1, 3, 5, 0, 2, 6, 4]);
        for (rank, &idx) in h.ranking().iter().enumerate() {
            assert_eq!(h.rank_of(idx), rank);
        }
    }

    #[test]
    fn advance_moves_one_trial_and_keeps_input() {
        let h = hotel("h", &[8.0; 7]);
        let s0 = GameState::new(vec!["h".into(); 10]);
        let r = resolve_trial(1, &h, 0, Decision::Accept, &mut seeded(0)).unwrap();
        let s1 = s0.advance(r).unwrap();
        assert_eq!(s0.current_trial(), 1);
        assert_eq!(s1.current_trial(), 2);

        let bad = resolve_trial(3, &h, 0, Decision::Accept, &mut seeded(0)).unwrap();
        assert_eq!(
            s1.advance(bad),
            Err(GameError::TrialOutOfOrder {
                expected: 2,
                got: 3
            })
        );
    }

    #[test]
    fn tenth_record_makes_state_terminal() {
        let h = hotel("h", &[6.0, 9.0, 8.0, 8.0, 7.0, 9.0, 10.0]);
        let mut rng = seeded(4);
        let mut s = GameState::new(vec!["h".into(); 10]);
        for t in 1..=10 {
            assert!(!s.is_terminal());
            let d = Decision::from_accept(t % 3 != 0);
            s = s.advance(resolve_trial(t, &h, 1, d, &mut rng).unwrap()).unwrap();
        }
        assert!(s.is_terminal());
        assert_eq!(s.current_trial(), 11);
        let extra = resolve_trial(11, &h, 1, Decision::Accept, &mut rng).unwrap();
        assert_eq!(s.advance(extra), Err(GameError::GameFinished));
    }

    #[test]
    fn replay_reproduces_accept_count() {
        let hotels: Vec<Hotel> = (0..10)
            .map(|i| hotel(&format!("h{i}"), &[f64::from(i), 8.0, 9.0, 4.0, 10.0, 7.5, 2.0]))
            .collect();
        let seq: Vec<String> = hotels.iter().map(|h| h.id().to_string()).collect();
        let mut rng = seeded(11);
        let mut log = Vec::new();
        for (t, h) in hotels.iter().enumerate() {
            let d = Decision::from_accept(rng.random_bool(0.6));
            log.push(resolve_trial(t + 1, h, t % 7, d, &mut rng).unwrap());
        }
        let accepts = log.iter().filter(|r| r.decision.is_accept()).count() as u32;
        let a = GameState::replay(seq.clone(), &log).unwrap();
        let b = GameState::replay(seq, &log).unwrap();
        assert_eq!(a.expert_payoff(), accepts);
        assert_eq!(a, b);
    }

    #[test]
    fn hotel_mismatch_is_detected() {
        let h = hotel("other", &[8.0; 7]);
        let s = GameState::new(vec!["h".into(); 2]);
        let r = resolve_trial(1, &h, 0, Decision::Accept, &mut seeded(0)).unwrap();
        assert!(matches!(s.advance(r), Err(GameError::HotelMismatch { .. })));
    }

    #[test]
    fn validate_catches_tampering() {
        let h = hotel("h", &[3.0, 5.0, 7.0, 8.0, 9.0, 9.0, 10.0]);
        let mut r = resolve_trial(1, &h, 0, Decision::Accept, &mut seeded(2)).unwrap();
        assert!(r.validate(Some(&h)).is_ok());
        r.lottery_result = 4.0;
        assert!(r.validate(Some(&h)).is_err());
        let mut r = resolve_trial(1, &h, 0, Decision::Reject, &mut seeded(2)).unwrap();
        r.expert_payoff = 1;
        assert!(r.validate(None).is_err());
    }

    #[test]
    fn hotel_json_revalidates() {
        let h = hotel("h", &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
        let json = serde_json::to_string(&h).unwrap();
        let back: Hotel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, h);
        let short = serde_json::to_string(&hotel("s", &[1.0, 2.0])).unwrap();
        assert!(serde_json::from_str::<Hotel>(&short).is_err());
    }
}
