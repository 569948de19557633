//! `serve` and `play`: a human as the decision-maker.

use std::io::{BufRead, Write};
use std::time::Duration;

use anyhow::Context;
use persuasion::game::{Decision, Hotel};
use persuasion::harness::{play_game, GameRngs};
use persuasion::mcts::SearchBudget;
use persuasion::models::{DecisionMaker, TrialView};
use persuasion::rng::{stream, GameRng};
use persuasion_service::{Service, ServiceConfig, ServiceError};
use rand::seq::IndexedRandom;

use crate::config::{Config, ConfigError};
use crate::data;

fn budget(think_ms: u64, max_iterations: u64) -> SearchBudget {
    SearchBudget {
        iterations: Some(max_iterations),
        time_limit: Some(Duration::from_millis(think_ms)),
    }
}

pub fn serve(config: &Config) -> anyhow::Result<()> {
    let s = &config.serve;
    let corpus = data::corpus(&config.paths.test_corpus)?;
    let models = data::models(config)?;
    let mut settings = config.experts.clone();
    settings.search.budget = budget(s.think_ms, s.max_iterations);
    let experts = data::experts(&models, &corpus, &settings);
    let names: Vec<&str> = experts.names().collect();
    println!("experts: {}", names.join(", "));
    if !experts.contains(&s.default_expert) {
        eprintln!("warning: default expert {} is not available", s.default_expert);
    }
    let service_config = ServiceConfig {
        default_expert: s.default_expert.clone(),
        horizon: config.tournament.horizon,
        ttl: Duration::from_secs(s.ttl_secs),
        lottery_visible: s.lottery_visible,
        journal: s.journal.clone(),
        workers: s.workers,
        cors_origin: s.cors_origin.clone(),
    };
    let svc = Service::new(service_config, corpus, experts).map_err(|e| match e {
        ServiceError::Config(m) => anyhow::Error::new(ConfigError(m)),
        other => anyhow::Error::new(other),
    })?;
    println!("restored sessions: {}", svc.session_count());

    let runtime = tokio::runtime::Runtime::new().context("starting the async runtime")?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(&s.addr)
            .await
            .map_err(|e| ConfigError(format!("cannot listen on {}: {e}", s.addr)))?;
        println!("listening on http://{}", listener.local_addr()?);
        persuasion_service::serve(svc, listener, async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
        anyhow::Ok(())
    })
}

/// The terminal player. Reads `a`/`r` lines; end of input ends the game.
struct Terminal<R> {
    input: R,
    closed: bool,
}

impl<R: BufRead + Send> DecisionMaker for Terminal<R> {
    fn decide(&mut self, view: &TrialView<'_>, _rng: &mut GameRng) -> Decision {
        if self.closed {
            return Decision::Reject;
        }
        let review = &view.hotel.reviews()[view.review];
        println!("\n-- trial {} of {} --", view.trial, view.horizon);
        for (sign, text) in [("+", &review.positive_text), ("-", &review.negative_text)] {
            if !text.is_empty() {
                println!("  {sign} {text}");
            }
        }
        loop {
            print!("book this hotel? [a]ccept / [r]eject: ");
            let _ = std::io::stdout().flush();
            let mut line = String::new();
            match self.input.read_line(&mut line) {
                Ok(0) | Err(_) => {
                    self.closed = true;
                    println!();
                    return Decision::Reject;
                }
                Ok(_) => match line.trim().to_ascii_lowercase().as_str() {
                    "a" | "accept" | "y" | "yes" => return Decision::Accept,
                    "r" | "reject" | "n" | "no" => return Decision::Reject,
                    _ => println!("please answer a or r"),
                },
            }
        }
    }

    fn reset(&mut self) {}
}

pub fn terminal(config: &Config) -> anyhow::Result<()> {
    let p = &config.play;
    let horizon = config.tournament.horizon;
    let corpus = data::corpus(&config.paths.test_corpus)?;
    data::ensure(corpus.len() >= horizon, || {
        format!("{} hotels cannot fill a {horizon}-trial game", corpus.len())
    })?;
    let models = data::models(config)?;
    let mut settings = config.experts.clone();
    settings.search.budget = budget(p.think_ms, p.max_iterations);
    let experts = data::experts(&models, &corpus, &settings);
    let mut expert = experts.create(&p.expert)?;

    let seed = p.seed.unwrap_or_else(rand::random);
    let hotels: Vec<&Hotel> = corpus.hotels().iter().collect();
    let sequence: Vec<&Hotel> = hotels.choose_multiple(&mut stream(seed, 0, 3), horizon).copied().collect();
    let mut rngs = GameRngs::for_game(seed, 0);
    let mut dm = Terminal {
        input: std::io::BufReader::new(std::io::stdin()),
        closed: false,
    };
    println!("{horizon} hotels; each shows you one review chosen by expert {}.", p.expert);
    println!("Accepting pays the hotel's lottery minus 8; rejecting pays 0. (seed {seed})");

    let visible = p.lottery_visible;
    let mut total = 0.0;
    let state = play_game(&sequence, expert.as_mut(), &mut dm, &mut rngs, |_, _, _, record| {
        total += record.dm_payoff;
        let lottery = if visible || record.decision.is_accept() {
            format!("lottery {:.2}, ", record.lottery_result)
        } else {
            String::new()
        };
        println!("  {lottery}your payoff {:+.2}, total {total:+.2}", record.dm_payoff);
    })?;
    if dm.closed {
        anyhow::bail!("input ended before the game was over");
    }

    println!("\n== debrief ==");
    println!("{:>5} {:>8} {:>7} {:>8} {:>8} {:>7}", "trial", "hotel", "avg", "shown", "choice", "payoff");
    for r in state.completed() {
        println!(
            "{:>5} {:>8} {:>7.2} {:>8.2} {:>8} {:>+7.2}",
            r.trial_index,
            r.hotel_id,
            r.hotel_score,
            r.revealed_score,
            if r.decision.is_accept() { "accept" } else { "reject" },
            r.dm_payoff
        );
    }
    println!(
        "you earned {:+.2}; the expert earned {} of {horizon}",
        state.dm_payoff(),
        state.expert_payoff()
    );
    Ok(())
}
