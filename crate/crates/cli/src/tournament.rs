//! `tournament`: a grid of expert-vs-simulated-DM runs on the test hotels.

use persuasion::experts::{ExpertError, ExpertRegistry};
use persuasion::harness::{run_tournament, TournamentConfig, TournamentResult, TournamentSummary};
use persuasion::models::ModelRegistry;

use crate::config::Config;
use crate::data;

/// Everything a sweep needs, loaded once.
pub struct Arena {
    pub corpus: persuasion::dataset::Corpus,
    pub models: ModelRegistry,
    pub experts: ExpertRegistry,
}

impl Arena {
    pub fn load(config: &Config) -> anyhow::Result<Arena> {
        let corpus = data::corpus(&config.paths.test_corpus)?;
        let models = data::models(config)?;
        let experts = data::experts(&models, &corpus, &config.experts);
        Ok(Arena { corpus, models, experts })
    }

    /// Whether `name` can play; unknown names are configuration errors.
    pub fn available(&self, name: &str) -> anyhow::Result<bool> {
        match self.experts.create(name) {
            Ok(_) => Ok(true),
            Err(ExpertError::Unavailable { .. }) => Ok(false),
            Err(e) => Err(e.into()),
        }
    }

    pub fn run(&self, base: &TournamentConfig, expert: &str, alpha: f64) -> anyhow::Result<TournamentResult> {
        let config = TournamentConfig {
            expert: expert.to_string(),
            alpha,
            ..base.clone()
        };
        let t = std::time::Instant::now();
        let result = run_tournament(&config, self.corpus.hotels(), &self.experts, &self.models)?;
        eprintln!("  {expert} vs {} done in {:.1}s", config.dm_label(), t.elapsed().as_secs_f64());
        Ok(result)
    }
}

pub fn header() {
    println!(
        "{:<12} {:<18} {:>6} {:>24} {:>26}",
        "expert", "dm", "games", "expert payoff [95% CI]", "dm payoff [95% CI]"
    );
}

pub fn row(s: &TournamentSummary) {
    let e = format!(
        "{:.3} [{:.3}, {:.3}]",
        s.expert_payoff.mean, s.expert_payoff.lower, s.expert_payoff.upper
    );
    let d = format!("{:.3} [{:.3}, {:.3}]", s.dm_payoff.mean, s.dm_payoff.lower, s.dm_payoff.upper);
    let dm = format!("{}{:+.2}", s.dm, s.alpha);
    println!("{:<12} {dm:<18} {:>6} {e:>24} {d:>26}", s.expert, s.games);
}

pub fn run(config: &Config) -> anyhow::Result<()> {
    let sweep = &config.sweep;
    let base = &config.tournament;
    let experts = if sweep.experts.is_empty() {
        vec![base.expert.clone()]
    } else {
        sweep.experts.clone()
    };
    let alphas = if sweep.alphas.is_empty() {
        vec![base.alpha]
    } else {
        sweep.alphas.clone()
    };
    let arena = Arena::load(config)?;
    let dir = &config.paths.results;
    let mut summaries = Vec::new();
    header();
    for expert in &experts {
        for &alpha in &alphas {
            let result = arena.run(base, expert, alpha)?;
            let s = result.summary();
            row(&s);
            let stem = format!("{expert}_{}", result.config.dm_label());
            if sweep.csv {
                std::fs::create_dir_all(dir)?;
                result.save_csv(&dir.join(format!("{stem}.csv")))?;
            }
            if sweep.logs {
                data::write(
                    &dir.join(format!("{stem}.jsonl")),
                    &persuasion::dataset::write_game_logs(&result.logs),
                )?;
            }
            summaries.push(s);
        }
    }
    let out = dir.join("tournament.json");
    data::write(&out, &serde_json::to_string_pretty(&summaries)?)?;
    println!("report: {}", out.display());
    Ok(())
}
