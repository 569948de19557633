//! `persuade`: command-line driver for the persuasion game.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data error, 1 anything else.

mod analyze;
mod config;
mod data;
mod play;
mod prepare;
mod tournament;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use persuasion::dataset::DatasetError;
use persuasion::experts::ExpertError;
use persuasion::features::ManifestError;
use persuasion::harness::{TournamentError, TrainError};
use persuasion::models::ModelError;

use config::{Config, ConfigError};

#[derive(Parser)]
#[command(name = "persuade", version, about = "Repeated persuasion games: data, training, tournaments and live play")]
struct Cli {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(short, long, global = true, env = "PERSUADE_CONFIG")]
    config: Option<PathBuf>,
    /// Override one configuration value, e.g. `-s tournament.games=200`.
    #[arg(short = 's', long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic corpus split into train and test hotels, with games on each.
    Generate,
    /// Train the model suite on the training logs.
    Train,
    /// Score every loaded model on the test logs.
    Evaluate,
    /// Run tournaments over the configured experts and alphas.
    Tournament,
    /// Run the analysis grid: payoffs, correlation, personalization, topics and score bins.
    Analyze,
    /// Serve the HTTP session API for human players.
    Serve,
    /// Play a game in the terminal as the decision-maker.
    Play,
    /// Print the effective configuration.
    Config,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let config = Config::load(cli.config.as_deref(), &cli.overrides)?;
    match cli.command {
        Command::Generate => prepare::generate(&config),
        Command::Train => prepare::train(&config),
        Command::Evaluate => prepare::evaluate(&config),
        Command::Tournament => tournament::run(&config),
        Command::Analyze => analyze::run(&config),
        Command::Serve => play::serve(&config),
        Command::Play => play::terminal(&config),
        Command::Config => {
            print!("{}", config.to_toml());
            Ok(())
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    const CONFIG: u8 = 2;
    const DATA: u8 = 3;
    for cause in e.chain() {
        if cause.is::<ConfigError>() || cause.is::<ManifestError>() {
            return CONFIG;
        }
        if let Some(t) = cause.downcast_ref::<TournamentError>() {
            if t.is_config() {
                return CONFIG;
            }
        }
        if let Some(TrainError::UnknownRole(_)) = cause.downcast_ref::<TrainError>() {
            return CONFIG;
        }
        if let Some(ExpertError::Unknown(_) | ExpertError::Unavailable { .. }) = cause.downcast_ref::<ExpertError>() {
            return CONFIG;
        }
        if let Some(m) = cause.downcast_ref::<ModelError>() {
            return if matches!(m, ModelError::UnknownRole(_)) { CONFIG } else { DATA };
        }
        if cause.is::<DatasetError>() {
            return DATA;
        }
    }
    1
}
