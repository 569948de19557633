//! A repeated persuasion game between an informed expert and a decision-maker,
//! with the machinery needed to build an artificial expert for it.
//!
//! Every trial the expert sees seven scored reviews of a hotel and reveals the
//! text of one of them. The decision-maker accepts or rejects the hotel; on
//! acceptance the expert earns 1 and the decision-maker earns a lottery draw
//! from the seven scores minus 8.
//!
//! Crate layout:
//!
//! - [`game`]: entities, trial resolution and replay.
//! - [`features`]: statistical game features and hand-crafted text features.
//! - [`neural`]: a from-scratch gated recurrent network, Adagrad and a linear-margin model.
//! - [`models`]: decision-maker and value models, baselines and simulated decision-makers.
//! - [`mcts`]: the UCT planner used by the artificial expert.
//! - [`experts`]: every expert strategy behind one interface.
//! - [`dataset`]: corpus and game-log files plus a synthetic data generator.
//! - [`harness`]: tournaments, metrics, bootstrap intervals and analyses.

pub mod dataset;
pub mod experts;
pub mod features;
pub mod game;
pub mod harness;
pub mod mcts;
pub mod models;
pub mod neural;
pub mod rng;

pub use game::{Decision, GameError, GameState, Hotel, Review, TrialRecord};
