//! Expert strategies. Each game gets a fresh [`Expert`] from an
//! [`ExpertRegistry`] factory, since some experts track the game as it goes.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::FeatureEncoder;
use crate::game::{GameState, Hotel, TrialRecord};
use crate::mcts::{search, SearchConfig, SearchError, SearchInput, SearchResult};
use crate::models::{DecisionModel, Memory, ModelError, ModelRegistry, TrialView, ValueModel};
use crate::rng::GameRng;

#[derive(Debug, Error)]
pub enum ExpertError {
    #[error("unknown expert {0:?}")]
    Unknown(String),
    #[error("expert {name:?} is unavailable: {reason}")]
    Unavailable { name: String, reason: String },
    #[error("hotel {0} has no reviews")]
    EmptyHotel(String),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

pub trait Expert: Send {
    fn name(&self) -> &str;

    /// Index of the review to reveal for `hotel` at the current trial.
    fn choose_review(&mut self, state: &GameState, hotel: &Hotel, rng: &mut GameRng) -> Result<usize, ExpertError>;

    /// Sees the outcome of the trial played from `before`.
    fn observe(&mut self, _before: &GameState, _hotel: &Hotel, _record: &TrialRecord) {}

    /// Diagnostics of the most recent search, for experts that plan.
    fn last_search(&self) -> Option<&SearchResult> {
        None
    }
}

fn nonempty(hotel: &Hotel) -> Result<(), ExpertError> {
    if hotel.is_empty() {
        Err(ExpertError::EmptyHotel(hotel.id().to_string()))
    } else {
        Ok(())
    }
}

/// Review ranked `rank` (zero-based) by score, clamped to the hotel size.
fn ranked(hotel: &Hotel, rank: usize) -> usize {
    let order = hotel.ranking();
    order[rank.min(order.len() - 1)]
}

/// The review holding the median score (fourth of seven by descending
/// score); among reviews sharing that score, the lowest index.
pub fn median_review(hotel: &Hotel) -> usize {
    let median = hotel.reviews()[ranked(hotel, (hotel.len() - 1) / 2)].score;
    hotel
        .reviews()
        .iter()
        .position(|r| r.score == median)
        .expect("the median score belongs to a review")
}

pub fn highest_review(hotel: &Hotel) -> usize {
    ranked(hotel, 0)
}

pub fn lowest_review(hotel: &Hotel) -> usize {
    ranked(hotel, hotel.len() - 1)
}

pub fn extremist_review(hotel: &Hotel) -> usize {
    if hotel.avg_score() >= 8.0 {
        highest_review(hotel)
    } else {
        lowest_review(hotel)
    }
}

/// A pure function of the hotel.
struct Static {
    name: &'static str,
    pick: fn(&Hotel) -> usize,
}

impl Expert for Static {
    fn name(&self) -> &str {
        self.name
    }

    fn choose_review(&mut self, _state: &GameState, hotel: &Hotel, _rng: &mut GameRng) -> Result<usize, ExpertError> {
        nonempty(hotel)?;
        Ok((self.pick)(hotel))
    }
}

struct Random;

impl Expert for Random {
    fn name(&self) -> &str {
        "rand"
    }

    fn choose_review(&mut self, _state: &GameState, hotel: &Hotel, rng: &mut GameRng) -> Result<usize, ExpertError> {
        nonempty(hotel)?;
        Ok(rng.random_range(0..hotel.len()))
    }
}

/// Highest review until the first rejection, then second or third highest,
/// then the median after the second rejection.
pub struct AdaptiveLiar;

impl AdaptiveLiar {
    pub fn phase(state: &GameState) -> u32 {
        state.summary().rejections().min(2)
    }
}

impl Expert for AdaptiveLiar {
    fn name(&self) -> &str {
        "a-liar"
    }

    fn choose_review(&mut self, state: &GameState, hotel: &Hotel, rng: &mut GameRng) -> Result<usize, ExpertError> {
        nonempty(hotel)?;
        Ok(match Self::phase(state) {
            0 => highest_review(hotel),
            1 => ranked(hotel, rng.random_range(1..=2)),
            _ => median_review(hotel),
        })
    }
}

/// Cosine similarity; zero when either vector is zero.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Reveals the review whose HC bits are closest to the mean of the reviews
/// revealed in accepted trials; random until something is accepted.
pub struct PersonalTaste {
    encoder: Arc<FeatureEncoder>,
    sum: Vec<f64>,
    accepted: usize,
}

impl PersonalTaste {
    pub fn new(encoder: Arc<FeatureEncoder>) -> Self {
        let dim = encoder.manifest().feature_names().len();
        PersonalTaste {
            encoder,
            sum: vec![0.0; dim],
            accepted: 0,
        }
    }
}

impl Expert for PersonalTaste {
    fn name(&self) -> &str {
        "ptd-hc"
    }

    fn choose_review(&mut self, _state: &GameState, hotel: &Hotel, rng: &mut GameRng) -> Result<usize, ExpertError> {
        nonempty(hotel)?;
        if self.accepted == 0 {
            return Ok(rng.random_range(0..hotel.len()));
        }
        let mean: Vec<f64> = self.sum.iter().map(|s| s / self.accepted as f64).collect();
        let mut best = (f64::NEG_INFINITY, 0);
        for (i, r) in hotel.reviews().iter().enumerate() {
            let sim = cosine(&self.encoder.hc(r).to_vec(), &mean);
            // Similarities equal up to rounding count as ties.
            if sim > best.0 + 1e-12 {
                best = (sim, i);
            }
        }
        Ok(best.1)
    }

    fn observe(&mut self, _before: &GameState, hotel: &Hotel, record: &TrialRecord) {
        if !record.decision.is_accept() {
            return;
        }
        if let Some(i) = hotel.review_index(&record.revealed_review_id) {
            for (s, b) in self.sum.iter_mut().zip(self.encoder.hc(&hotel.reviews()[i]).to_vec()) {
                *s += b;
            }
            self.accepted += 1;
        }
    }
}

/// Samples reviews in proportion to their VM values (or their softmax).
pub struct VmProportional {
    vm: Arc<dyn ValueModel>,
    softmax: bool,
    memory: Memory,
}

impl VmProportional {
    pub fn new(vm: Arc<dyn ValueModel>, softmax: bool) -> Self {
        VmProportional {
            vm,
            softmax,
            memory: Memory::empty(),
        }
    }

    /// Selection probabilities for each review of `hotel`.
    pub fn distribution(&self, state: &GameState, hotel: &Hotel) -> Vec<f64> {
        let values: Vec<f64> = (0..hotel.len())
            .map(|r| self.vm.future_payoff(&TrialView::new(state, hotel, r), &self.memory))
            .collect();
        let weights: Vec<f64> = if self.softmax {
            let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            values.iter().map(|v| (v - m).exp()).collect()
        } else {
            values.iter().map(|v| v.max(0.0)).collect()
        };
        let total: f64 = weights.iter().sum();
        if total > 0.0 && total.is_finite() {
            weights.iter().map(|w| w / total).collect()
        } else {
            vec![1.0 / hotel.len() as f64; hotel.len()]
        }
    }
}

impl Expert for VmProportional {
    fn name(&self) -> &str {
        "vm-sm"
    }

    fn choose_review(&mut self, state: &GameState, hotel: &Hotel, rng: &mut GameRng) -> Result<usize, ExpertError> {
        nonempty(hotel)?;
        let dist = self.distribution(state, hotel);
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, p) in dist.iter().enumerate() {
            acc += p;
            if u < acc {
                return Ok(i);
            }
        }
        Ok(dist.iter().rposition(|&p| p > 0.0).unwrap_or(0))
    }

    fn observe(&mut self, before: &GameState, hotel: &Hotel, record: &TrialRecord) {
        if let Some(i) = hotel.review_index(&record.revealed_review_id) {
            self.memory = self.vm.step(&TrialView::new(before, hotel, i), &self.memory).memory;
        }
    }
}

/// The MCTS-planning artificial expert.
pub struct ArtificialExpert {
    name: String,
    dmm: Arc<dyn DecisionModel>,
    vm: Arc<dyn ValueModel>,
    pool: Arc<[Hotel]>,
    config: SearchConfig,
    dmm_memory: Memory,
    vm_memory: Memory,
    last: Option<SearchResult>,
}

impl ArtificialExpert {
    pub fn new(
        name: impl Into<String>,
        dmm: Arc<dyn DecisionModel>,
        vm: Arc<dyn ValueModel>,
        pool: Arc<[Hotel]>,
        config: SearchConfig,
    ) -> Self {
        ArtificialExpert {
            name: name.into(),
            dmm,
            vm,
            pool,
            config,
            dmm_memory: Memory::empty(),
            vm_memory: Memory::empty(),
            last: None,
        }
    }
}

impl Expert for ArtificialExpert {
    fn name(&self) -> &str {
        &self.name
    }

    fn choose_review(&mut self, state: &GameState, hotel: &Hotel, rng: &mut GameRng) -> Result<usize, ExpertError> {
        nonempty(hotel)?;
        let result = search(
            SearchInput {
                state,
                hotel,
                dmm: self.dmm.as_ref(),
                vm: self.vm.as_ref(),
                dmm_memory: &self.dmm_memory,
                vm_memory: &self.vm_memory,
                pool: &self.pool,
            },
            &self.config,
            rng,
        )?;
        let best = result.best_review;
        self.last = Some(result);
        Ok(best)
    }

    fn observe(&mut self, before: &GameState, hotel: &Hotel, record: &TrialRecord) {
        if let Some(i) = hotel.review_index(&record.revealed_review_id) {
            let view = TrialView::new(before, hotel, i);
            self.dmm_memory = self.dmm.step(&view, &self.dmm_memory).memory;
            self.vm_memory = self.vm.step(&view, &self.vm_memory).memory;
        }
    }

    fn last_search(&self) -> Option<&SearchResult> {
        self.last.as_ref()
    }
}

/// DMM and VM roles an MCTS expert plans with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AeBinding {
    pub dmm: String,
    pub vm: String,
}

impl AeBinding {
    pub fn new(dmm: &str, vm: &str) -> Self {
        AeBinding {
            dmm: dmm.to_string(),
            vm: vm.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExpertSettings {
    /// MCTS experts by name.
    pub planners: BTreeMap<String, AeBinding>,
    pub search: SearchConfig,
    pub vm_sm_role: String,
    /// Exponentiate VM values instead of using them directly.
    pub vm_sm_softmax: bool,
}

impl Default for ExpertSettings {
    fn default() -> Self {
        let planners = [
            ("ae", AeBinding::new("dmm.hc-lstm", "vm.hc-lstm")),
            ("ae-dm2", AeBinding::new("dmm.linear", "vm.hc-lstm")),
            ("ae-vm2", AeBinding::new("dmm.hc-lstm", "vm.linear")),
            ("ae-sg", AeBinding::new("dmm.sg-lstm", "vm.sg-lstm")),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        ExpertSettings {
            planners,
            search: SearchConfig::default(),
            vm_sm_role: "vm.hc-lstm".into(),
            vm_sm_softmax: false,
        }
    }
}

pub type ExpertFactory = Arc<dyn Fn() -> Box<dyn Expert> + Send + Sync>;

/// Expert factories by name. Experts whose models are missing are listed
/// as unavailable with the reason.
#[derive(Clone, Default)]
pub struct ExpertRegistry {
    factories: BTreeMap<String, ExpertFactory>,
    unavailable: BTreeMap<String, String>,
}

impl std::fmt::Debug for ExpertRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExpertRegistry")
            .field("available", &self.factories.keys().collect::<Vec<_>>())
            .field("unavailable", &self.unavailable)
            .finish()
    }
}

pub const STATIC_EXPERTS: [&str; 6] = ["rand", "median", "highest", "extremist", "a-liar", "ptd-hc"];

impl ExpertRegistry {
    pub fn new(models: &ModelRegistry, pool: Arc<[Hotel]>, settings: &ExpertSettings) -> Self {
        let mut r = ExpertRegistry::default();
        r.register("rand", Arc::new(|| Box::new(Random)));
        r.register(
            "median",
            Arc::new(|| {
                Box::new(Static {
                    name: "median",
                    pick: median_review,
                })
            }),
        );
        r.register(
            "highest",
            Arc::new(|| {
                Box::new(Static {
                    name: "highest",
                    pick: highest_review,
                })
            }),
        );
        r.register(
            "extremist",
            Arc::new(|| {
                Box::new(Static {
                    name: "extremist",
                    pick: extremist_review,
                })
            }),
        );
        r.register("a-liar", Arc::new(|| Box::new(AdaptiveLiar)));
        let encoder = models.encoder(crate::features::FeatureMode::Textual).clone();
        r.register("ptd-hc", Arc::new(move || Box::new(PersonalTaste::new(encoder.clone()))));

        match models.vm(&settings.vm_sm_role) {
            Ok(vm) => {
                let softmax = settings.vm_sm_softmax;
                r.register("vm-sm", Arc::new(move || Box::new(VmProportional::new(vm.clone(), softmax))));
            }
            Err(e) => {
                r.unavailable.insert("vm-sm".into(), e.to_string());
            }
        }
        for (name, binding) in &settings.planners {
            match (models.dmm(&binding.dmm), models.vm(&binding.vm)) {
                (Ok(dmm), Ok(vm)) => {
                    let (name2, pool, config) = (name.clone(), pool.clone(), settings.search);
                    r.register(
                        name,
                        Arc::new(move || {
                            Box::new(ArtificialExpert::new(name2.clone(), dmm.clone(), vm.clone(), pool.clone(), config))
                        }),
                    );
                }
                (Err(e), _) | (_, Err(e)) => {
                    r.unavailable.insert(name.clone(), e.to_string());
                }
            }
        }
        r
    }

    pub fn register(&mut self, name: &str, factory: ExpertFactory) {
        self.unavailable.remove(name);
        self.factories.insert(name.to_string(), factory);
    }

    pub fn create(&self, name: &str) -> Result<Box<dyn Expert>, ExpertError> {
        if let Some(f) = self.factories.get(name) {
            return Ok(f());
        }
        match self.unavailable.get(name) {
            Some(reason) => Err(ExpertError::Unavailable {
                name: name.to_string(),
                reason: reason.clone(),
            }),
            None => Err(ExpertError::Unknown(name.to_string())),
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.factories.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }
}
