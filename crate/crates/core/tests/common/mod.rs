#![allow(dead_code)]

pub mod expectimax;
pub mod fd;
pub mod sg;

use persuasion::game::{Decision, GameState, Hotel, Review, TrialRecord};
use persuasion::rng::GameRng;
use rand::seq::IndexedRandom;
use rand::Rng;

const WORDS: &[&str] = &[
    "staff", "friendly", "location", "great", "room", "small", "breakfast", "expensive", "clean", "view",
    "noisy", "metro", "station", "bed", "comfortable", "price", "value", "modern", "design", "pool", "rude",
    "excellent", "dirty", "wifi", "parking", "quiet", "spacious", "shower", "helpful", "walk",
];

pub fn text(rng: &mut GameRng, max_words: usize) -> String {
    let n = rng.random_range(0..=max_words);
    (0..n).map(|_| *WORDS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

/// Scores on the 0.1 grid in `[lo, 10]`.
pub fn score(rng: &mut GameRng, lo: f64) -> f64 {
    (rng.random_range(lo..=10.0) * 10.0).round() / 10.0
}

pub fn random_hotel(rng: &mut GameRng, id: &str) -> Hotel {
    let reviews = (0..7)
        .map(|i| {
            let s = score(rng, 2.5);
            Review::new(format!("{id}-r{i}"), s, text(rng, 40), text(rng, 25)).unwrap()
        })
        .collect();
    Hotel::new(id, reviews).unwrap()
}

pub fn hotel(id: &str, scores: &[f64]) -> Hotel {
    let reviews = scores
        .iter()
        .enumerate()
        .map(|(i, &s)| Review::new(format!("{id}-r{i}"), s, "", "").unwrap())
        .collect();
    Hotel::fixture(id, reviews).unwrap()
}

/// A state after `trials` random trials over fresh random hotels.
pub fn random_state(rng: &mut GameRng, trials: usize) -> GameState {
    let mut state = GameState::with_horizon(10);
    for t in 0..trials {
        let h = random_hotel(rng, &format!("past{t}"));
        let r = rng.random_range(0..7);
        let lottery = h.reviews()[rng.random_range(0..7)].score;
        let rec = TrialRecord::new(state.current_trial(), &h, r, Decision::from_accept(rng.random_bool(0.6)), lottery).unwrap();
        state.apply(rec).unwrap();
    }
    state
}
