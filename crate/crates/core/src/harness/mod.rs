//! Tournaments, evaluation metrics, bootstrap intervals and analytics.

pub mod analytics;
pub mod bootstrap;
pub mod metrics;
pub mod play;
pub mod tournament;
pub mod training;

pub use bootstrap::{bootstrap_mean, Interval};
pub use play::{play_game, GameRngs};
pub use tournament::{run_tournament, TournamentConfig, TournamentError, TournamentResult, TournamentSummary};
pub use training::{
    evaluate_dmm, evaluate_vm, train_average_value, train_linear, train_recurrent, train_suite, write_suite, DmmMetrics,
    SuiteConfig, TrainError, VmMetrics, SUITE_ROLES,
};
