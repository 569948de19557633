//! Synthetic corpora and games for training and tests.
//!
//! Hotels fall into low, medium and high tiers. Review texts are assembled
//! from the default HC lexicons, with more and warmer positive sentences for
//! higher scores, so the hand-crafted features carry signal about the score.
//! Games pair a scripted expert with a scripted decision-maker archetype.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{Corpus, CorpusMeta, DatasetError, GameLog};
use crate::experts::{ExpertRegistry, ExpertSettings};
use crate::features::FeatureManifest;
use crate::game::{Decision, Hotel, Review, DEFAULT_HORIZON};
use crate::harness::{play_game, GameRngs};
use crate::models::{DecisionMaker, ModelRegistry, TrialView};
use crate::neural::sigmoid;
use crate::rng::{derive_seed, seeded, GameRng};

/// Scripted decision-maker behaviour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[derive(Default)]
pub enum Archetype {
    /// Accepts iff the revealed score is at least `threshold`.
    Threshold { threshold: f64 },
    /// Accepts with probability `p` whatever is revealed.
    Trusting { p: f64 },
    /// A threshold player who rejects the trial after an accepted hotel
    /// lost money.
    SpitefulAfterLoss { threshold: f64 },
    /// Stochastic player with individual traits: logistic in the revealed
    /// score, swayed by the text's tone, punishing the expert after a loss
    /// and warming up after a win.
    #[default]
    Behavioral,
}


impl Archetype {
    pub fn label(&self) -> &'static str {
        match self {
            Archetype::Threshold { .. } => "threshold",
            Archetype::Trusting { .. } => "trusting",
            Archetype::SpitefulAfterLoss { .. } => "spiteful",
            Archetype::Behavioral => "behavioral",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Traits {
    sensitivity: f64,
    threshold: f64,
    tone: f64,
    spite: f64,
    warmth: f64,
}

/// One scripted decision-maker.
#[derive(Debug, Clone)]
pub struct ArchetypeDm {
    archetype: Archetype,
    traits: Traits,
    seen_trials: u32,
    seen_accepts: u32,
    seen_payoff: f64,
}

impl ArchetypeDm {
    /// Behavioural traits are drawn from `seed`; other archetypes ignore it.
    pub fn new(archetype: Archetype, seed: u64) -> Self {
        let mut rng = seeded(seed);
        let traits = Traits {
            sensitivity: rng.random_range(1.3..2.2),
            threshold: Normal::new(8.2, 0.35).expect("valid normal").sample(&mut rng),
            tone: rng.random_range(0.5..1.5),
            spite: rng.random_range(2.5..4.0),
            warmth: rng.random_range(0.3..0.9),
        };
        ArchetypeDm {
            archetype,
            traits,
            seen_trials: 0,
            seen_accepts: 0,
            seen_payoff: 0.0,
        }
    }

    /// Acceptance probability for `view`, given what the DM remembers of
    /// the previous trial.
    fn probability(&self, view: &TrialView<'_>, last: Option<(bool, f64)>) -> f64 {
        let review = &view.hotel.reviews()[view.review];
        let score = review.score;
        let lost = matches!(last, Some((true, p)) if p < 0.0);
        let won = matches!(last, Some((true, p)) if p > 0.0);
        match self.archetype {
            Archetype::Threshold { threshold } => f64::from(u8::from(score >= threshold)),
            Archetype::Trusting { p } => p,
            Archetype::SpitefulAfterLoss { threshold } => f64::from(u8::from(score >= threshold && !lost)),
            Archetype::Behavioral => {
                let t = &self.traits;
                let len = (review.positive_text.len() + review.negative_text.len()).max(1) as f64;
                let tone = review.positive_text.len() as f64 / len - 0.5;
                let mut logit = t.sensitivity * (score - t.threshold) + t.tone * tone;
                if lost {
                    logit -= t.spite;
                }
                if won {
                    logit += t.warmth;
                }
                sigmoid(logit)
            }
        }
    }
}

impl DecisionMaker for ArchetypeDm {
    fn decide(&mut self, view: &TrialView<'_>, rng: &mut GameRng) -> Decision {
        let h = view.history;
        // The previous trial, recovered from the change in the running totals.
        let last = (h.trials == self.seen_trials + 1)
            .then_some((h.accepts > self.seen_accepts, h.dm_payoff_sum - self.seen_payoff));
        self.seen_trials = h.trials;
        self.seen_accepts = h.accepts;
        self.seen_payoff = h.dm_payoff_sum;
        let p = self.probability(view, last);
        Decision::from_accept(rng.random::<f64>() < p)
    }

    fn reset(&mut self) {
        self.seen_trials = 0;
        self.seen_accepts = 0;
        self.seen_payoff = 0.0;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticConfig {
    pub seed: u64,
    pub hotels: usize,
    pub games: usize,
    pub horizon: usize,
    pub archetype: Archetype,
    /// Experts playing the generated games, one drawn per game.
    pub experts: Vec<String>,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            seed: 1,
            hotels: 200,
            games: 400,
            horizon: DEFAULT_HORIZON,
            archetype: Archetype::Behavioral,
            experts: ["rand", "median", "highest", "extremist", "a-liar"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        }
    }
}

const TOPIC_WORDS: [&[&str]; 9] = [
    &["location", "area", "neighbourhood"],
    &["metro station", "bus", "parking", "airport taxi"],
    &["staff", "reception", "service", "front desk"],
    &["room", "bed", "bathroom", "shower"],
    &["pool", "gym", "wifi", "lift"],
    &["breakfast", "restaurant", "coffee", "bar"],
    &["price", "value for money", "cost"],
    &["decor", "design", "furniture"],
    &["view", "balcony", "terrace"],
];
const POSITIVE: [&[&str]; 3] = [
    &["amazing", "excellent", "fantastic", "perfect", "outstanding", "wonderful", "superb"],
    &["good", "nice", "great", "lovely", "pleasant", "comfortable"],
    &["ok", "fine", "decent", "acceptable"],
];
const NEGATIVE: [&[&str]; 3] = [
    &["terrible", "awful", "horrible", "disgusting"],
    &["bad", "poor", "disappointing", "uncomfortable"],
    &["basic", "average", "a bit small"],
];

fn sentence(rng: &mut GameRng, adjectives: &[&str], shout: bool) -> String {
    let topic = TOPIC_WORDS.choose(rng).expect("topics").choose(rng).expect("words");
    let adj = adjectives.choose(rng).expect("adjectives");
    let end = if shout { "!" } else { "." };
    match rng.random_range(0..3) {
        0 => format!("The {topic} was {adj}{end}"),
        1 => format!("We found the {topic} {adj}{end}"),
        _ => format!("Really {adj} {topic}{end}"),
    }
}

fn part(rng: &mut GameRng, n: usize, level: usize, lexicon: &[&[&str]; 3], shout_p: f64) -> String {
    (0..n)
        .map(|_| {
            let shout = rng.random_bool(shout_p);
            sentence(rng, lexicon[level], shout)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Review texts whose tone, length and intensity follow the score.
pub fn review_text(rng: &mut GameRng, score: f64) -> (String, String) {
    let jitter = |rng: &mut GameRng| rng.random_range(-1i32..=1);
    let n_pos = ((score - 2.0) / 2.0).round() as i32 + jitter(rng);
    let n_neg = ((10.0 - score) / 2.0).round() as i32 + jitter(rng);
    let pos_level = if score >= 9.0 {
        0
    } else if score >= 7.0 {
        1
    } else {
        2
    };
    let neg_level = if score < 5.0 {
        0
    } else if score < 7.5 {
        1
    } else {
        2
    };
    let shout_pos = if score >= 9.3 { 0.3 } else { 0.03 };
    let shout_neg = if score < 5.0 { 0.3 } else { 0.03 };
    let mut positive = part(rng, n_pos.clamp(0, 6) as usize, pos_level, &POSITIVE, shout_pos);
    let negative = part(rng, n_neg.clamp(0, 6) as usize, neg_level, &NEGATIVE, shout_neg);
    while positive.len() + negative.len() < super::MIN_REVIEW_CHARS {
        let extra = sentence(rng, POSITIVE[2], false);
        if !positive.is_empty() {
            positive.push(' ');
        }
        positive.push_str(&extra);
    }
    (positive, negative)
}

/// A corpus of `n` hotels; mean scores come from three tiers.
pub fn generate_corpus(seed: u64, n: usize) -> Corpus {
    let mut rng = seeded(derive_seed(seed, 0xC0));
    let tiers = [(6.6, 0.3), (8.0, 0.4), (9.1, 0.3)];
    let hotels = (0..n)
        .map(|h| {
            let u: f64 = rng.random();
            let mean = if u < tiers[0].1 {
                tiers[0].0
            } else if u < tiers[0].1 + tiers[1].1 {
                tiers[1].0
            } else {
                tiers[2].0
            };
            let mean: f64 = mean + rng.random_range(-0.4..0.4);
            let spread: Normal<f64> = Normal::new(0.0, 1.2).expect("valid normal");
            let id = format!("h{h:04}");
            let reviews = (0..7)
                .map(|r| {
                    let score = ((mean + spread.sample(&mut rng)).clamp(2.5, 10.0) * 10.0).round() / 10.0;
                    let (p, n) = review_text(&mut rng, score);
                    Review::new(format!("{id}-r{r}"), score, p, n).expect("scores are clamped")
                })
                .collect();
            Hotel::new(id, reviews).expect("seven reviews")
        })
        .collect();
    Corpus::new(
        hotels,
        CorpusMeta {
            provenance: format!("synthetic, seed {seed}"),
            ..CorpusMeta::default()
        },
    )
    .expect("generated reviews are long enough and uniquely named")
}

/// Plays `games` games over `corpus`, each on `horizon` distinct hotels,
/// with an expert drawn from `experts` and a fresh DM of `archetype`.
pub fn play_logs(
    corpus: &Corpus,
    games: usize,
    horizon: usize,
    archetype: Archetype,
    experts: &[String],
    seed: u64,
) -> Result<Vec<GameLog>, DatasetError> {
    if corpus.len() < horizon {
        return Err(DatasetError::Data(format!(
            "{} hotels cannot fill a {horizon}-trial game",
            corpus.len()
        )));
    }
    if experts.is_empty() {
        return Err(DatasetError::Data("no experts to play the games".into()));
    }
    let models = ModelRegistry::with_baselines(FeatureManifest::default_manifest());
    let registry = ExpertRegistry::new(&models, Arc::from(corpus.hotels().to_vec()), &ExpertSettings::default());
    let hotels: Vec<&Hotel> = corpus.hotels().iter().collect();
    (0..games)
        .map(|g| {
            let mut rng = seeded(derive_seed(seed, g as u64));
            let sequence: Vec<&Hotel> = hotels.choose_multiple(&mut rng, horizon).copied().collect();
            let expert_id = experts.choose(&mut rng).expect("non-empty");
            let mut expert = registry
                .create(expert_id)
                .map_err(|e| DatasetError::Data(e.to_string()))?;
            let mut dm = ArchetypeDm::new(archetype, derive_seed(seed ^ 0xD3, g as u64));
            let mut rngs = GameRngs::for_game(seed, g as u64);
            let state = play_game(&sequence, expert.as_mut(), &mut dm, &mut rngs, |_, _, _, _| {})
                .map_err(|e| DatasetError::Data(e.to_string()))?;
            Ok(GameLog {
                game_id: format!("syn-{seed}-{g}"),
                expert_id: expert_id.clone(),
                dm_id: format!("{}-{g}", archetype.label()),
                lottery_visible: true,
                records: state.completed().to_vec(),
            })
        })
        .collect()
}

/// A corpus and games played on it.
pub fn generate_synthetic(config: &SyntheticConfig) -> Result<(Corpus, Vec<GameLog>), DatasetError> {
    let corpus = generate_corpus(config.seed, config.hotels);
    let logs = play_logs(
        &corpus,
        config.games,
        config.horizon,
        config.archetype,
        &config.experts,
        derive_seed(config.seed, 0x10),
    )?;
    Ok((corpus, logs))
}
