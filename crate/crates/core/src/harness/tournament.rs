//! Simulated tournaments: one expert against a shifted DM over many games.

use std::io::Write;
use std::path::Path;

use rand::seq::IndexedRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::bootstrap::{bootstrap_mean, Interval};
use super::play::{play_game, GameRngs};
use crate::dataset::GameLog;
use crate::experts::{ExpertError, ExpertRegistry};
use crate::game::Hotel;
use crate::models::{ModelError, ModelRegistry, SimulatedDm};
use crate::rng::{derive_seed, seeded, stream};

#[derive(Debug, Error)]
pub enum TournamentError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("configuration error: {0}")]
    Model(#[from] ModelError),
    #[error("game {game} failed: {source}")]
    Game {
        game: usize,
        #[source]
        source: ExpertError,
    },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl TournamentError {
    /// Whether the error is in the configuration rather than the data.
    pub fn is_config(&self) -> bool {
        match self {
            TournamentError::Config(_) | TournamentError::Model(_) => true,
            TournamentError::Game { source, .. } => {
                matches!(source, ExpertError::Unknown(_) | ExpertError::Unavailable { .. })
            }
            TournamentError::Io { .. } => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TournamentConfig {
    pub expert: String,
    /// Role of the DMM the simulated DM is built from.
    pub dm: String,
    /// Shift added to the DMM's acceptance probability.
    pub alpha: f64,
    pub games: usize,
    pub horizon: usize,
    pub seed: u64,
    pub resamples: usize,
    pub confidence: f64,
}

impl Default for TournamentConfig {
    fn default() -> Self {
        TournamentConfig {
            expert: "ae".into(),
            dm: "dmm.hc-lstm".into(),
            alpha: 0.0,
            games: 1000,
            horizon: 10,
            seed: 0,
            resamples: 1000,
            confidence: 0.95,
        }
    }
}

impl TournamentConfig {
    pub fn dm_label(&self) -> String {
        format!("{}{:+.2}", self.dm, self.alpha)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TournamentResult {
    pub config: TournamentConfig,
    pub expert_payoffs: Vec<f64>,
    pub dm_payoffs: Vec<f64>,
    pub expert: Interval,
    pub dm: Interval,
    /// Every game in full, in game order.
    pub logs: Vec<GameLog>,
}

/// The aggregate part of a result, for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TournamentSummary {
    pub expert: String,
    pub dm: String,
    pub alpha: f64,
    pub games: usize,
    pub expert_payoff: Interval,
    pub dm_payoff: Interval,
}

impl TournamentResult {
    pub fn summary(&self) -> TournamentSummary {
        TournamentSummary {
            expert: self.config.expert.clone(),
            dm: self.config.dm.clone(),
            alpha: self.config.alpha,
            games: self.expert_payoffs.len(),
            expert_payoff: self.expert,
            dm_payoff: self.dm,
        }
    }

    /// One CSV row per game.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["game", "expert", "dm", "alpha", "expert_payoff", "dm_payoff", "revealed"])?;
        for (g, log) in self.logs.iter().enumerate() {
            let revealed: Vec<&str> = log.records.iter().map(|r| r.revealed_review_id.as_str()).collect();
            w.write_record([
                g.to_string(),
                self.config.expert.clone(),
                self.config.dm.clone(),
                self.config.alpha.to_string(),
                self.expert_payoffs[g].to_string(),
                self.dm_payoffs[g].to_string(),
                revealed.join(" "),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<(), TournamentError> {
        let io = |source| TournamentError::Io {
            path: path.display().to_string(),
            source,
        };
        let file = std::fs::File::create(path).map_err(io)?;
        self.write_csv(std::io::BufWriter::new(file)).map_err(|e| io(e.into()))
    }
}

/// Plays `config.games` games on fresh random sequences of distinct hotels
/// from `hotels`. Game `g` uses seeds derived from `(config.seed, g)` only,
/// so results do not depend on thread scheduling, and runs that differ only
/// in expert or alpha face the same hotel orders and lotteries.
pub fn run_tournament(
    config: &TournamentConfig,
    hotels: &[Hotel],
    experts: &ExpertRegistry,
    models: &ModelRegistry,
) -> Result<TournamentResult, TournamentError> {
    if config.games == 0 || config.horizon == 0 {
        return Err(TournamentError::Config("games and horizon must be positive".into()));
    }
    if hotels.len() < config.horizon {
        return Err(TournamentError::Config(format!(
            "{} hotels cannot fill a {}-trial game",
            hotels.len(),
            config.horizon
        )));
    }
    if !(0.0..1.0).contains(&config.confidence) {
        return Err(TournamentError::Config(format!("confidence {} not in [0, 1)", config.confidence)));
    }
    let base = models.dmm(&config.dm)?;
    experts.create(&config.expert).map_err(|e| TournamentError::Config(e.to_string()))?;

    let dm_label = config.dm_label();
    let logs = (0..config.games)
        .into_par_iter()
        .map(|g| {
            let mut order = stream(config.seed, g as u64, 3);
            let sequence: Vec<&Hotel> = hotels.choose_multiple(&mut order, config.horizon).collect();
            let mut expert = experts
                .create(&config.expert)
                .map_err(|source| TournamentError::Game { game: g, source })?;
            let mut dm = SimulatedDm::new(base.clone(), config.alpha);
            let mut rngs = GameRngs::for_game(config.seed, g as u64);
            let state = play_game(&sequence, expert.as_mut(), &mut dm, &mut rngs, |_, _, _, _| {})
                .map_err(|source| TournamentError::Game { game: g, source })?;
            Ok(GameLog {
                game_id: format!("t{}-{g}", config.seed),
                expert_id: config.expert.clone(),
                dm_id: dm_label.clone(),
                lottery_visible: true,
                records: state.completed().to_vec(),
            })
        })
        .collect::<Result<Vec<_>, TournamentError>>()?;

    let expert_payoffs: Vec<f64> = logs.iter().map(|l| f64::from(l.expert_payoff())).collect();
    let dm_payoffs: Vec<f64> = logs.iter().map(GameLog::dm_payoff).collect();
    let mut boot = seeded(derive_seed(config.seed, u64::MAX));
    let expert = bootstrap_mean(&expert_payoffs, config.resamples, config.confidence, &mut boot);
    let dm = bootstrap_mean(&dm_payoffs, config.resamples, config.confidence, &mut boot);
    Ok(TournamentResult {
        config: config.clone(),
        expert_payoffs,
        dm_payoffs,
        expert,
        dm,
        logs,
    })
}
