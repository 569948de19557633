//! Exhaustive expectimax over small games, and the fixtures it is run on.

use persuasion::game::{Decision, GameState, HistorySummary, Hotel, Review};
use persuasion::mcts::{search, SearchConfig, SearchInput, SearchResult};
use persuasion::models::{DecisionModel, Memory, TrialView, ValueModel};
use persuasion::rng::seeded;

pub fn hotel(id: &str, scores: &[f64]) -> Hotel {
    let reviews = scores
        .iter()
        .enumerate()
        .map(|(i, &s)| Review::new(format!("{id}-r{i}"), s, "", "").unwrap())
        .collect();
    Hotel::fixture(id, reviews).unwrap()
}

/// Acceptance depends on the trial, the previous decision and lottery, and
/// the review, so the second trial has to be planned.
pub fn table_p(v: &TrialView<'_>) -> f64 {
    let score = v.hotel.reviews()[v.review].score;
    if v.trial == 1 {
        // Review 0 is tempting now but sours the DM afterwards.
        if score >= 9.0 {
            0.8
        } else {
            0.6
        }
    } else {
        let soured = v.history.dm_payoff_sum < 0.0;
        let base = if score >= 9.0 { 0.7 } else { 0.4 };
        if soured {
            base - 0.35
        } else {
            base + 0.25
        }
    }
}

/// Expected future accepts from `trial`, maximised over reviews, averaged
/// over decisions, lotteries and unplayed pool hotels.
pub fn expectimax(
    history: HistorySummary,
    trial: usize,
    horizon: usize,
    hotel: &Hotel,
    pool: &[Hotel],
    played: &[&str],
    p: &dyn Fn(&TrialView<'_>) -> f64,
) -> (f64, usize) {
    let mut best = (f64::NEG_INFINITY, 0);
    for review in 0..hotel.len() {
        let view = TrialView {
            history: &history,
            trial,
            horizon,
            hotel,
            review,
        };
        let pa = p(&view);
        let mut value = pa;
        if trial < horizon {
            let next: Vec<&Hotel> = pool
                .iter()
                .filter(|h| h.id() != hotel.id() && !played.contains(&h.id()))
                .collect();
            let mut played2 = played.to_vec();
            played2.push(hotel.id());
            for (d, pd) in [(Decision::Accept, pa), (Decision::Reject, 1.0 - pa)] {
                for lottery in hotel.scores() {
                    let mut h2 = history;
                    h2.push(d, lottery, hotel.avg_score());
                    for nh in &next {
                        let w = pd / hotel.len() as f64 / next.len() as f64;
                        value += w * expectimax(h2, trial + 1, horizon, nh, pool, &played2, p).0;
                    }
                }
            }
        }
        if value > best.0 {
            best = (value, review);
        }
    }
    best
}

pub fn run(state: &GameState, h: &Hotel, dmm: &dyn DecisionModel, vm: &dyn ValueModel, pool: &[Hotel], cfg: &SearchConfig, seed: u64) -> SearchResult {
    let m = Memory::empty();
    search(
        SearchInput {
            state,
            hotel: h,
            dmm,
            vm,
            dmm_memory: &m,
            vm_memory: &m,
            pool,
        },
        cfg,
        &mut seeded(seed),
    )
    .unwrap()
}

pub fn two_trial_fixture() -> (Hotel, Vec<Hotel>) {
    let current = hotel("c", &[9.5, 6.0]);
    let pool = vec![hotel("a", &[9.0, 7.0]), hotel("b", &[10.0, 6.5]), current.clone()];
    (current, pool)
}
