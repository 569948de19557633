//! One human game: the expert's hidden choices, the lotteries and the
//! stored outcomes that make submits idempotent.

use persuasion::dataset::GameLog;
use persuasion::experts::{Expert, ExpertError};
use persuasion::game::{resolve_trial, GameState, Hotel, TrialRecord};
use persuasion::rng::stream;
use rand::seq::IndexedRandom;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::api::{
    Choice, Debrief, DebriefReview, DebriefTrial, HistoryRow, Outcome, ReviewText, SessionView, Status, Totals,
};

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("trial {got} cannot be decided now; the session is at {state}")]
    WrongTrial { got: usize, state: String },
    #[error("trial {trial} was already decided as {stored:?}")]
    Conflict { trial: usize, stored: Choice },
    #[error("the session is not finished")]
    NotFinished,
    #[error("expert failed: {0}")]
    Expert(#[from] ExpertError),
    #[error("stored session does not replay: {0}")]
    Replay(String),
}

/// Journal entry; a session is rebuilt by applying its entries in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Created {
        session_id: String,
        expert: String,
        seed: u64,
        lottery_visible: bool,
        hotels: Vec<String>,
        first_review: usize,
        at_ms: u64,
    },
    Decided {
        session_id: String,
        record: TrialRecord,
        next_review: Option<usize>,
        at_ms: u64,
    },
}

impl Event {
    pub fn session_id(&self) -> &str {
        match self {
            Event::Created { session_id, .. } | Event::Decided { session_id, .. } => session_id,
        }
    }
}

/// The hotels of a session with the given seed: a random ordered draw of
/// `horizon` distinct hotels.
pub fn hotel_order(pool: &[Hotel], seed: u64, horizon: usize) -> Vec<Hotel> {
    pool.choose_multiple(&mut stream(seed, 0, 3), horizon).cloned().collect()
}

pub struct Session {
    id: String,
    expert_name: String,
    seed: u64,
    lottery_visible: bool,
    hotels: Vec<Hotel>,
    state: GameState,
    expert: Box<dyn Expert>,
    current_review: Option<usize>,
    outcomes: Vec<Outcome>,
    last_active_ms: u64,
}

impl std::fmt::Debug for Session {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Session")
            .field("id", &self.id)
            .field("expert", &self.expert_name)
            .field("trial", &self.state.current_trial())
            .finish_non_exhaustive()
    }
}

impl Session {
    /// Starts a game on `hotels` and lets the expert pick the first review.
    pub fn start(
        id: String,
        expert_name: String,
        mut expert: Box<dyn Expert>,
        hotels: Vec<Hotel>,
        seed: u64,
        lottery_visible: bool,
        now_ms: u64,
    ) -> Result<(Session, Event), SessionError> {
        let state = GameState::new(hotels.iter().map(|h| h.id().to_string()).collect());
        let first = expert.choose_review(&state, &hotels[0], &mut stream(seed, 1, 0))?;
        let event = Event::Created {
            session_id: id.clone(),
            expert: expert_name.clone(),
            seed,
            lottery_visible,
            hotels: state.hotel_sequence().to_vec(),
            first_review: first,
            at_ms: now_ms,
        };
        let session = Session {
            id,
            expert_name,
            seed,
            lottery_visible,
            hotels,
            state,
            expert,
            current_review: Some(first),
            outcomes: Vec::new(),
            last_active_ms: now_ms,
        };
        Ok((session, event))
    }

    /// Rebuilds a session from its creation entry. `hotels` must be the
    /// entry's hotels in order.
    #[allow(clippy::too_many_arguments)]
    pub fn restore(
        id: String,
        expert_name: String,
        expert: Box<dyn Expert>,
        hotels: Vec<Hotel>,
        seed: u64,
        lottery_visible: bool,
        first_review: usize,
        at_ms: u64,
    ) -> Result<Session, SessionError> {
        if first_review >= hotels[0].len() {
            return Err(SessionError::Replay(format!("review {first_review} outside the first hotel")));
        }
        Ok(Session {
            state: GameState::new(hotels.iter().map(|h| h.id().to_string()).collect()),
            id,
            expert_name,
            seed,
            lottery_visible,
            hotels,
            expert,
            current_review: Some(first_review),
            outcomes: Vec::new(),
            last_active_ms: at_ms,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn is_finished(&self) -> bool {
        self.state.is_terminal()
    }

    pub fn last_active_ms(&self) -> u64 {
        self.last_active_ms
    }

    pub fn touch(&mut self, now_ms: u64) {
        self.last_active_ms = self.last_active_ms.max(now_ms);
    }

    fn status(&self) -> Status {
        if self.is_finished() {
            Status::Finished
        } else {
            Status::AwaitingDecision
        }
    }

    fn totals(&self) -> Totals {
        Totals {
            expert_payoff: self.state.expert_payoff(),
            dm_payoff: self.state.dm_payoff(),
        }
    }

    fn current_text(&self) -> Option<ReviewText> {
        let hotel = self.hotels.get(self.state.completed().len())?;
        self.current_review.map(|r| (&hotel.reviews()[r]).into())
    }

    pub fn view(&self) -> SessionView {
        SessionView {
            session_id: self.id.clone(),
            expert: self.expert_name.clone(),
            status: self.status(),
            horizon: self.state.horizon(),
            trial: (!self.is_finished()).then(|| self.state.current_trial()),
            current_review: self.current_text(),
            lottery_visible: self.lottery_visible,
            history: self.outcomes.iter().map(|o| o.result.clone()).collect(),
            totals: self.totals(),
        }
    }

    /// Applies `record` and the expert's next choice, then stores the outcome.
    /// `observed` tells whether the expert has already seen the record.
    fn apply(&mut self, record: TrialRecord, next_review: Option<usize>, observed: bool) -> Result<Outcome, SessionError> {
        let t = self.state.completed().len();
        let hotel = &self.hotels[t];
        let review = hotel
            .review_index(&record.revealed_review_id)
            .ok_or_else(|| SessionError::Replay(format!("review {} not in {}", record.revealed_review_id, hotel.id())))?;
        if !observed {
            self.expert.observe(&self.state, hotel, &record);
        }
        let row = HistoryRow::new(&record, &hotel.reviews()[review], self.lottery_visible);
        self.state.apply(record).map_err(|e| SessionError::Replay(e.to_string()))?;
        if self.is_finished() != next_review.is_none() {
            return Err(SessionError::Replay("next review does not match the game's progress".into()));
        }
        if let Some(r) = next_review {
            if r >= self.hotels[t + 1].len() {
                return Err(SessionError::Replay(format!("review {r} outside hotel {}", self.hotels[t + 1].id())));
            }
        }
        self.current_review = next_review;
        let outcome = Outcome {
            session_id: self.id.clone(),
            result: row,
            totals: self.totals(),
            status: self.status(),
            next_trial: (!self.is_finished()).then(|| self.state.current_trial()),
            next_review: self.current_text(),
        };
        self.outcomes.push(outcome.clone());
        Ok(outcome)
    }

    /// Decides `trial`. A repeat of an earlier decision returns the stored
    /// outcome and no journal entry.
    pub fn decide(&mut self, trial: usize, choice: Choice, now_ms: u64) -> Result<(Outcome, Option<Event>), SessionError> {
        if trial >= 1 && trial <= self.outcomes.len() {
            let stored = &self.outcomes[trial - 1];
            return if stored.result.decision == choice {
                Ok((stored.clone(), None))
            } else {
                Err(SessionError::Conflict {
                    trial,
                    stored: stored.result.decision,
                })
            };
        }
        if self.is_finished() || trial != self.state.current_trial() {
            let state = if self.is_finished() {
                "the end of the game".to_string()
            } else {
                format!("trial {}", self.state.current_trial())
            };
            return Err(SessionError::WrongTrial { got: trial, state });
        }
        let review = self.current_review.expect("unfinished sessions have a current review");
        let hotel = &self.hotels[trial - 1];
        let record = resolve_trial(trial, hotel, review, choice.into(), &mut stream(self.seed, trial as u64, 2))
            .expect("the expert picked a review of this hotel");
        self.expert.observe(&self.state, hotel, &record);
        let next_review = if trial < self.hotels.len() {
            let after = self.state.advance(record.clone()).expect("fresh records apply");
            let next = self
                .expert
                .choose_review(&after, &self.hotels[trial], &mut stream(self.seed, trial as u64 + 1, 0))?;
            Some(next)
        } else {
            None
        };
        let outcome = self.apply(record.clone(), next_review, true)?;
        self.touch(now_ms);
        let event = Event::Decided {
            session_id: self.id.clone(),
            record,
            next_review,
            at_ms: now_ms,
        };
        Ok((outcome, Some(event)))
    }

    /// Replays a journal entry.
    pub fn replay(&mut self, record: TrialRecord, next_review: Option<usize>, at_ms: u64) -> Result<(), SessionError> {
        let t = self.state.completed().len();
        let review = self.current_review.ok_or_else(|| SessionError::Replay("decision after the end".into()))?;
        if record.trial_index != t + 1 || record.revealed_review_id != self.hotels[t].reviews()[review].id {
            return Err(SessionError::Replay(format!("unexpected record for trial {}", record.trial_index)));
        }
        record
            .validate(Some(&self.hotels[t]))
            .map_err(|e| SessionError::Replay(e.to_string()))?;
        self.apply(record, next_review, false)?;
        self.touch(at_ms);
        Ok(())
    }

    pub fn debrief(&self) -> Result<Debrief, SessionError> {
        if !self.is_finished() {
            return Err(SessionError::NotFinished);
        }
        let trials = self
            .state
            .completed()
            .iter()
            .zip(&self.hotels)
            .map(|(r, h)| DebriefTrial {
                trial: r.trial_index,
                hotel_id: h.id().to_string(),
                hotel_score: h.avg_score(),
                reviews: h
                    .reviews()
                    .iter()
                    .map(|rv| DebriefReview {
                        review_id: rv.id.clone(),
                        score: rv.score,
                        revealed: rv.id == r.revealed_review_id,
                    })
                    .collect(),
                decision: r.decision.into(),
                lottery_result: r.lottery_result,
                dm_payoff: r.dm_payoff,
                expert_payoff: r.expert_payoff,
            })
            .collect();
        Ok(Debrief {
            session_id: self.id.clone(),
            expert: self.expert_name.clone(),
            trials,
            totals: self.totals(),
        })
    }

    pub fn to_log(&self) -> GameLog {
        GameLog {
            game_id: self.id.clone(),
            expert_id: self.expert_name.clone(),
            dm_id: "human".into(),
            lottery_visible: self.lottery_visible,
            records: self.state.completed().to_vec(),
        }
    }
}
