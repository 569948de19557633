//! Search results checked against exhaustive expectimax on small games.

mod common;

use common::expectimax::{expectimax, hotel, run, table_p, two_trial_fixture};
use persuasion::game::{GameState, HistorySummary};
use persuasion::mcts::{SearchBudget, SearchConfig};
use persuasion::models::{FnDecisionModel, FnValueModel, TrialView};

#[test]
fn single_trial_q_values_match_the_oracle() {
    let probs = [0.9, 0.5, 0.1];
    let dmm = FnDecisionModel::new("oracle", move |v: &TrialView<'_>| probs[v.review]);
    let exact_vm = FnValueModel::new("exact", move |v: &TrialView<'_>| probs[v.review]);
    let state = GameState::with_horizon(1);
    let h = hotel("h", &[5.0, 7.0, 9.0]);
    let (v, a) = expectimax(HistorySummary::default(), 1, 1, &h, &[], &[], &|v| probs[v.review]);
    assert_eq!((a, v), (0, 0.9));
    for vm_init in [false, true] {
        let cfg = SearchConfig {
            budget: SearchBudget::iterations(50_000),
            vm_init,
            ..SearchConfig::default()
        };
        let r = run(&state, &h, &dmm, &exact_vm, &[], &cfg, 11);
        assert_eq!(r.best_review, 0);
        for (act, p) in r.actions.iter().zip(probs) {
            assert!((act.q - p).abs() < 0.05, "q {} vs {p}", act.q);
        }
    }
}

#[test]
fn two_trial_search_matches_expectimax() {
    let (current, pool) = two_trial_fixture();
    let (v_star, a_star) = expectimax(HistorySummary::default(), 1, 2, &current, &pool, &[], &table_p);
    let dmm = FnDecisionModel::new("table", table_p);
    let mfo = persuasion::models::MaxFuture;
    let state = GameState::with_horizon(2);
    for (vm_init, expected_rewards) in [(false, true), (true, true), (false, false)] {
        let cfg = SearchConfig {
            budget: SearchBudget::iterations(40_000),
            vm_init,
            expected_rewards,
            ..SearchConfig::default()
        };
        let r = run(&state, &current, &dmm, &mfo, &pool, &cfg, 21);
        assert_eq!(r.best_review, a_star, "{:?}", r.actions);
        let value = r.root_value() * 2.0;
        assert!((value - v_star).abs() / 2.0 < 0.05, "root {value} vs {v_star}");
    }
}

#[test]
fn more_iterations_do_not_increase_root_error() {
    let (current, pool) = two_trial_fixture();
    let (v_star, _) = expectimax(HistorySummary::default(), 1, 2, &current, &pool, &[], &table_p);
    let dmm = FnDecisionModel::new("table", table_p);
    let mfo = persuasion::models::MaxFuture;
    let state = GameState::with_horizon(2);
    let mut previous = f64::INFINITY;
    for budget in [50, 500, 5000] {
        let cfg = SearchConfig {
            budget: SearchBudget::iterations(budget),
            ..SearchConfig::default()
        };
        let err: f64 = (0..20)
            .map(|seed| (run(&state, &current, &dmm, &mfo, &pool, &cfg, seed).root_value() - v_star / 2.0).abs())
            .sum::<f64>()
            / 20.0;
        eprintln!("budget {budget}: mean root error {err:.4}");
        assert!(err <= previous + 1e-12);
        previous = err;
    }
}
