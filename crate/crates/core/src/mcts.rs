//! UCT search over review choices. Decisions are sampled from a DMM, lottery
//! outcomes branch over the hotel's scores, and new nodes start from VM
//! estimates.
//!
//! Every iteration determinizes the unknown future by drawing hotels without
//! replacement from a pool, so child nodes are keyed by the next hotel as
//! well as by (review, decision, lottery outcome).

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Decision, GameState, HistorySummary, Hotel};
use crate::models::{DecisionModel, Memory, TrialView, ValueModel};
use crate::rng::GameRng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("search budget must allow at least one iteration")]
    EmptyBudget,
    #[error("exploration constant must be finite and non-negative, got {0}")]
    BadExploration(f64),
    #[error("hotel pool has {available} unplayed hotels but {needed} future trials remain")]
    PoolTooSmall { needed: usize, available: usize },
    #[error("the game is already finished")]
    Finished,
    #[error("the current hotel has no reviews")]
    NoReviews,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub iterations: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    pub fn iterations(n: u64) -> Self {
        SearchBudget {
            iterations: Some(n),
            time_limit: None,
        }
    }

    pub fn time(limit: Duration) -> Self {
        SearchBudget {
            iterations: None,
            time_limit: Some(limit),
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        match (self.iterations, self.time_limit) {
            (None, None) | (Some(0), _) => Err(SearchError::EmptyBudget),
            (_, Some(t)) if t.is_zero() => Err(SearchError::EmptyBudget),
            _ => Ok(()),
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self::iterations(20_000)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub exploration: f64,
    pub budget: SearchBudget,
    /// Seed each new node's actions with the VM estimate and one virtual visit.
    pub vm_init: bool,
    /// Score each simulated trial by the DMM's acceptance probability instead
    /// of the sampled accept bit. Same expectation, lower variance.
    pub expected_rewards: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            exploration: 0.5,
            budget: SearchBudget::default(),
            vm_init: true,
            expected_rewards: true,
        }
    }
}

/// Upper confidence bound of one action; unvisited actions come first.
pub fn uct_score(q: f64, n_action: u64, n_total: u64, c: f64) -> f64 {
    if n_action == 0 {
        return f64::INFINITY;
    }
    q + c * ((n_total.max(1) as f64).ln() / n_action as f64).sqrt()
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ActionStat {
    /// Visits including the virtual visit of the VM seed.
    pub n: u64,
    pub q: f64,
    pub seed: Option<f64>,
}

impl ActionStat {
    /// Incremental mean update.
    pub fn backup(&mut self, value: f64) {
        self.n += 1;
        self.q += (value - self.q) / self.n as f64;
    }

    pub fn real_visits(&self) -> u64 {
        self.n - u64::from(self.seed.is_some())
    }
}

struct Node {
    actions: Vec<ActionStat>,
    children: HashMap<u64, u32>,
}

impl Node {
    fn total(&self) -> u64 {
        self.actions.iter().map(|a| a.n).sum()
    }

    fn select(&self, c: f64) -> usize {
        let total = self.total();
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (i, a) in self.actions.iter().enumerate() {
            let s = uct_score(a.q, a.n, total, c);
            if s > best_score {
                best = i;
                best_score = s;
            }
        }
        best
    }
}

fn child_key(review: usize, decision: Decision, lottery: usize, next_hotel: usize) -> u64 {
    debug_assert!(review < 256 && lottery < 256 && next_hotel < (1 << 40));
    (review as u64) | (u64::from(decision.is_accept()) << 8) | ((lottery as u64) << 9) | ((next_hotel as u64) << 17)
}

/// Everything the search needs about the real game.
#[derive(Clone, Copy)]
pub struct SearchInput<'a> {
    pub state: &'a GameState,
    pub hotel: &'a Hotel,
    pub dmm: &'a dyn DecisionModel,
    pub vm: &'a dyn ValueModel,
    /// DMM and VM memories after the completed trials.
    pub dmm_memory: &'a Memory,
    pub vm_memory: &'a Memory,
    /// Candidate future hotels; played hotels and the current one are skipped.
    pub pool: &'a [Hotel],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionReport {
    pub review: usize,
    pub review_id: String,
    /// Real visits, excluding the VM seed's virtual visit.
    pub visits: u64,
    pub q: f64,
    pub vm_seed: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_review: usize,
    pub iterations: u64,
    pub nodes: usize,
    pub elapsed_ms: f64,
    pub actions: Vec<ActionReport>,
}

impl SearchResult {
    /// Q of the chosen action, an estimate of the normalized root value.
    pub fn root_value(&self) -> f64 {
        self.actions[self.best_review].q
    }
}

struct Search<'a> {
    input: SearchInput<'a>,
    config: SearchConfig,
    candidates: Vec<usize>,
    future: usize,
    nodes: Vec<Node>,
}

impl<'a> Search<'a> {
    fn new_node(&mut self, history: &HistorySummary, trial: usize, hotel: &Hotel, vm_memory: &Memory) -> u32 {
        let remaining = (self.input.state.horizon() + 1 - trial) as f64;
        let actions = (0..hotel.len())
            .map(|review| {
                if self.config.vm_init {
                    let view = TrialView {
                        history,
                        trial,
                        horizon: self.input.state.horizon(),
                        hotel,
                        review,
                    };
                    let q = (self.input.vm.future_payoff(&view, vm_memory) / remaining).clamp(0.0, 1.0);
                    ActionStat {
                        n: 1,
                        q,
                        seed: Some(q),
                    }
                } else {
                    ActionStat::default()
                }
            })
            .collect();
        self.nodes.push(Node {
            actions,
            children: HashMap::new(),
        });
        (self.nodes.len() - 1) as u32
    }

    /// Hotel played at `trial` under the current determinization.
    fn hotel_at(&self, trial: usize, order: &[usize]) -> &'a Hotel {
        let root = self.input.state.current_trial();
        if trial == root {
            self.input.hotel
        } else {
            &self.input.pool[order[trial - root - 1]]
        }
    }

    /// Simulates one trial and returns its reward.
    fn play(
        &self,
        history: &mut HistorySummary,
        trial: usize,
        hotel: &Hotel,
        review: usize,
        dmm_memory: &mut Memory,
        rng: &mut GameRng,
    ) -> (f64, Decision, usize) {
        let view = TrialView {
            history,
            trial,
            horizon: self.input.state.horizon(),
            hotel,
            review,
        };
        let step = self.input.dmm.step(&view, dmm_memory);
        *dmm_memory = step.memory;
        let p = step.value;
        let decision = Decision::from_accept(rng.random::<f64>() < p);
        let lottery = rng.random_range(0..hotel.len());
        history.push(decision, hotel.reviews()[lottery].score, hotel.avg_score());
        let reward = if self.config.expected_rewards {
            p
        } else {
            f64::from(u8::from(decision.is_accept()))
        };
        (reward, decision, lottery)
    }

    fn iterate(&mut self, rng: &mut GameRng, order: &mut [usize], rewards: &mut Vec<f64>, path: &mut Vec<(u32, usize)>) {
        let horizon = self.input.state.horizon();
        let root_trial = self.input.state.current_trial();
        for i in 0..self.future {
            let j = rng.random_range(i..order.len());
            order.swap(i, j);
        }
        rewards.clear();
        path.clear();

        let mut history = *self.input.state.summary();
        let mut trial = root_trial;
        let mut dmm_memory = self.input.dmm_memory.clone();
        let mut vm_memory = self.input.vm_memory.clone();
        let c = self.config.exploration;

        // Selection, then one expansion.
        let mut node = 0u32;
        let mut expanded = false;
        loop {
            let hotel = self.hotel_at(trial, order);
            let review = self.nodes[node as usize].select(c);
            path.push((node, review));
            if self.config.vm_init && !expanded {
                let view = TrialView {
                    history: &history,
                    trial,
                    horizon,
                    hotel,
                    review,
                };
                vm_memory = self.input.vm.step(&view, &vm_memory).memory;
            }
            let (reward, decision, lottery) = self.play(&mut history, trial, hotel, review, &mut dmm_memory, rng);
            rewards.push(reward);
            trial += 1;
            if trial > horizon || expanded {
                break;
            }
            let next = order[trial - root_trial - 1];
            let key = child_key(review, decision, lottery, next);
            node = match self.nodes[node as usize].children.get(&key) {
                Some(&child) => child,
                None => {
                    let child = self.new_node(&history, trial, &self.input.pool[next], &vm_memory);
                    self.nodes[node as usize].children.insert(key, child);
                    expanded = true;
                    child
                }
            };
        }

        // Uniform random rollout to the end of the game.
        while trial <= horizon {
            let hotel = self.hotel_at(trial, order);
            let review = rng.random_range(0..hotel.len());
            let (reward, _, _) = self.play(&mut history, trial, hotel, review, &mut dmm_memory, rng);
            rewards.push(reward);
            trial += 1;
        }

        // Each node backs up the future payoff from its own trial divided by
        // the trials remaining there, which keeps every Q in [0, 1].
        let mut suffix: f64 = rewards.iter().sum();
        for (depth, &(n, a)) in path.iter().enumerate() {
            let remaining = (horizon + 1 - (root_trial + depth)) as f64;
            self.nodes[n as usize].actions[a].backup((suffix / remaining).clamp(0.0, 1.0));
            suffix -= rewards[depth];
        }
    }
}

/// Runs UCT from the current trial of `input.state` and picks the review
/// with the most visits (ties: higher Q, then lower index).
pub fn search(input: SearchInput<'_>, config: &SearchConfig, rng: &mut GameRng) -> Result<SearchResult, SearchError> {
    config.budget.validate()?;
    if !config.exploration.is_finite() || config.exploration < 0.0 {
        return Err(SearchError::BadExploration(config.exploration));
    }
    if input.state.is_terminal() {
        return Err(SearchError::Finished);
    }
    if input.hotel.is_empty() {
        return Err(SearchError::NoReviews);
    }
    let played: std::collections::HashSet<&str> = input
        .state
        .completed()
        .iter()
        .map(|r| r.hotel_id.as_str())
        .chain(std::iter::once(input.hotel.id()))
        .collect();
    let candidates: Vec<usize> = input
        .pool
        .iter()
        .enumerate()
        .filter(|(_, h)| !played.contains(h.id()) && !h.is_empty())
        .map(|(i, _)| i)
        .collect();
    let future = input.state.remaining_trials() - 1;
    if candidates.len() < future {
        return Err(SearchError::PoolTooSmall {
            needed: future,
            available: candidates.len(),
        });
    }

    let start = Instant::now();
    let mut s = Search {
        input,
        config: *config,
        candidates,
        future,
        nodes: Vec::new(),
    };
    s.new_node(input.state.summary(), input.state.current_trial(), input.hotel, input.vm_memory);
    let mut order = s.candidates.clone();
    let mut rewards = Vec::with_capacity(input.state.horizon());
    let mut path = Vec::with_capacity(input.state.horizon());
    let mut iterations = 0u64;
    loop {
        if config.budget.iterations.is_some_and(|n| iterations >= n) {
            break;
        }
        if config.budget.time_limit.is_some_and(|t| start.elapsed() >= t) {
            break;
        }
        s.iterate(rng, &mut order, &mut rewards, &mut path);
        iterations += 1;
    }

    let root = &s.nodes[0];
    debug_assert_eq!(root.actions.iter().map(ActionStat::real_visits).sum::<u64>(), iterations);
    let mut best = 0;
    for (i, a) in root.actions.iter().enumerate() {
        let b = &root.actions[best];
        if a.n > b.n || (a.n == b.n && a.q > b.q) {
            best = i;
        }
    }
    let actions = root
        .actions
        .iter()
        .enumerate()
        .map(|(i, a)| ActionReport {
            review: i,
            review_id: input.hotel.reviews()[i].id.clone(),
            visits: a.real_visits(),
            q: a.q,
            vm_seed: a.seed,
        })
        .collect();
    Ok(SearchResult {
        best_review: best,
        iterations,
        nodes: s.nodes.len(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        actions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::fixtures::hotel;
    use crate::models::{FnDecisionModel, FnValueModel, MaxFuture};
    use crate::rng::seeded;
    use proptest::prelude::{prop, prop_assert, proptest};

    #[test]
    fn uct_examples() {
        assert_eq!(uct_score(0.5, 1, 1, 0.5), 0.5);
        assert_eq!(uct_score(0.9, 0, 10, 0.5), f64::INFINITY);
        let expect = 0.2 + 0.5 * (100f64.ln() / 4.0).sqrt();
        assert!((uct_score(0.2, 4, 100, 0.5) - expect).abs() < 1e-12);
        assert!((expect - 0.7365).abs() < 1e-3);
    }

    #[test]
    fn backup_is_a_running_mean() {
        let mut a = ActionStat::default();
        a.backup(0.8);
        assert_eq!((a.n, a.q), (1, 0.8));
        let mut b = ActionStat::default();
        b.backup(0.0);
        b.backup(1.0);
        assert_eq!((b.n, b.q), (2, 0.5));
        let mut rng = seeded(5);
        let xs: Vec<f64> = (0..1000).map(|_| rng.random()).collect();
        let mut c = ActionStat::default();
        xs.iter().for_each(|&x| c.backup(x));
        assert!((c.q - xs.iter().sum::<f64>() / 1000.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn q_stays_in_unit_interval(xs in prop::collection::vec(0.0f64..=1.0, 1..200)) {
            let mut a = ActionStat::default();
            for x in xs {
                a.backup(x);
                prop_assert!((0.0..=1.0).contains(&a.q));
            }
        }
    }

    fn oracle_dmm() -> FnDecisionModel<impl Fn(&TrialView<'_>) -> f64 + Send + Sync> {
        FnDecisionModel::new("oracle", |v: &TrialView<'_>| [0.9, 0.5, 0.1][v.review])
    }

    fn run(
        state: &GameState,
        h: &Hotel,
        dmm: &dyn DecisionModel,
        vm: &dyn ValueModel,
        pool: &[Hotel],
        config: &SearchConfig,
        seed: u64,
    ) -> Result<SearchResult, SearchError> {
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
            config,
            &mut seeded(seed),
        )
    }

    #[test]
    fn zero_budget_and_bad_configs_are_errors() {
        let s = GameState::with_horizon(1);
        let h = hotel("h", &[5.0, 6.0, 7.0]);
        let mut cfg = SearchConfig {
            budget: SearchBudget::iterations(0),
            ..SearchConfig::default()
        };
        assert_eq!(run(&s, &h, &oracle_dmm(), &MaxFuture, &[], &cfg, 1).unwrap_err(), SearchError::EmptyBudget);
        cfg.budget = SearchBudget::iterations(10);
        cfg.exploration = -1.0;
        assert!(matches!(run(&s, &h, &oracle_dmm(), &MaxFuture, &[], &cfg, 1), Err(SearchError::BadExploration(_))));
        let s3 = GameState::with_horizon(3);
        cfg.exploration = 0.5;
        let pool = vec![hotel("p1", &[5.0; 3])];
        assert_eq!(
            run(&s3, &h, &oracle_dmm(), &MaxFuture, &pool, &cfg, 1).unwrap_err(),
            SearchError::PoolTooSmall { needed: 2, available: 1 }
        );
    }

    #[test]
    fn greedy_search_finds_the_best_single_trial_review() {
        let s = GameState::with_horizon(1);
        let h = hotel("h", &[5.0, 6.0, 7.0]);
        let cfg = SearchConfig {
            exploration: 0.0,
            budget: SearchBudget::iterations(200),
            vm_init: false,
            expected_rewards: true,
        };
        let r = run(&s, &h, &oracle_dmm(), &MaxFuture, &[], &cfg, 3).unwrap();
        assert_eq!(r.best_review, 0);
        for (a, p) in r.actions.iter().zip([0.9, 0.5, 0.1]) {
            assert!((a.q - p).abs() < 1e-12);
        }
    }

    #[test]
    fn root_visits_account_for_every_iteration() {
        let s = GameState::with_horizon(4);
        let h = hotel("h", &[3.0, 5.0, 7.0, 8.0, 9.0, 9.5, 10.0]);
        let pool: Vec<Hotel> = (0..5).map(|i| hotel(&format!("p{i}"), &[4.0, 6.0, 8.0, 9.0, 7.0, 8.5, 9.9])).collect();
        let dmm = FnDecisionModel::new("d", |v: &TrialView<'_>| v.hotel.reviews()[v.review].score / 10.0);
        for vm_init in [true, false] {
            let cfg = SearchConfig {
                budget: SearchBudget::iterations(500),
                vm_init,
                ..SearchConfig::default()
            };
            let r = run(&s, &h, &dmm, &MaxFuture, &pool, &cfg, 9).unwrap();
            assert_eq!(r.iterations, 500);
            assert_eq!(r.actions.iter().map(|a| a.visits).sum::<u64>(), 500);
            assert_eq!(r.nodes, 501, "one expansion per iteration");
            assert!(r.actions.iter().all(|a| (0.0..=1.0).contains(&a.q)));
        }
    }

    #[test]
    fn search_is_deterministic_for_a_seed() {
        let s = GameState::with_horizon(3);
        let h = hotel("h", &[3.0, 5.0, 7.0, 8.0, 9.0, 9.5, 10.0]);
        let pool: Vec<Hotel> = (0..4).map(|i| hotel(&format!("p{i}"), &[4.0, 6.0, 8.0, 9.0, 7.0, 8.5, 9.9])).collect();
        let dmm = FnDecisionModel::new("d", |v: &TrialView<'_>| v.hotel.reviews()[v.review].score / 10.0);
        let cfg = SearchConfig {
            budget: SearchBudget::iterations(300),
            ..SearchConfig::default()
        };
        let mut a = run(&s, &h, &dmm, &MaxFuture, &pool, &cfg, 4).unwrap();
        let mut b = run(&s, &h, &dmm, &MaxFuture, &pool, &cfg, 4).unwrap();
        a.elapsed_ms = 0.0;
        b.elapsed_ms = 0.0;
        assert_eq!(a, b);
    }

    #[test]
    fn always_accepting_dm_makes_every_review_worth_one() {
        let s = GameState::with_horizon(3);
        let h = hotel("h", &[3.0, 5.0, 7.0, 8.0, 9.0, 9.5, 10.0]);
        let pool: Vec<Hotel> = (0..4).map(|i| hotel(&format!("p{i}"), &[4.0, 6.0, 8.0, 9.0, 7.0, 8.5, 9.9])).collect();
        let dmm = FnDecisionModel::new("yes", |_: &TrialView<'_>| 1.0);
        let zero = FnValueModel::new("zero", |_: &TrialView<'_>| 0.0);
        let cfg = SearchConfig {
            budget: SearchBudget::iterations(2000),
            vm_init: false,
            ..SearchConfig::default()
        };
        let r = run(&s, &h, &dmm, &zero, &pool, &cfg, 2).unwrap();
        assert!(r.actions.iter().all(|a| (a.q - 1.0).abs() < 0.02));
    }

    #[test]
    fn time_budget_stops() {
        let s = GameState::with_horizon(1);
        let h = hotel("h", &[5.0, 6.0, 7.0]);
        let cfg = SearchConfig {
            budget: SearchBudget::time(Duration::from_millis(20)),
            ..SearchConfig::default()
        };
        let r = run(&s, &h, &oracle_dmm(), &MaxFuture, &[], &cfg, 1).unwrap();
        assert!(r.iterations > 0);
    }
}
