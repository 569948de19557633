//! Post-hoc analyses of tournament logs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::metrics::{mean, pearson};
use super::tournament::TournamentResult;
use crate::dataset::{Corpus, GameLog};
use crate::features::FeatureEncoder;
use crate::game::{Hotel, TrialRecord};

/// Pearson correlation between the experts' average payoffs and the DM's
/// average payoffs across `results`. `None` when either side is constant or
/// there are fewer than two results.
pub fn payoff_correlation(results: &[TournamentResult]) -> Option<f64> {
    let e: Vec<f64> = results.iter().map(|r| r.expert.mean).collect();
    let d: Vec<f64> = results.iter().map(|r| r.dm.mean).collect();
    pearson(&e, &d)
}

fn revealed<'a>(logs: &'a [GameLog], corpus: &'a Corpus) -> impl Iterator<Item = (&'a Hotel, usize, &'a TrialRecord)> + 'a {
    logs.iter().flat_map(|l| &l.records).filter_map(move |r| {
        let hotel = corpus.hotel(&r.hotel_id)?;
        Some((hotel, hotel.review_index(&r.revealed_review_id)?, r))
    })
}

/// Score of `review` rescaled so the hotel's lowest review is 0 and its
/// highest 1. `None` when all reviews share one score.
pub fn normalized_score(hotel: &Hotel, review: usize) -> Option<f64> {
    let (lo, hi) = hotel
        .scores()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s), hi.max(s)));
    if hi > lo {
        Some((hotel.reviews()[review].score - lo) / (hi - lo))
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Personalization {
    pub alpha: f64,
    /// Mean normalized revealed score; `None` without usable reveals.
    pub mean_normalized_score: Option<f64>,
    pub reveals: usize,
}

/// Mean normalized revealed score for each DM variant. Reveals on hotels
/// whose reviews all share one score carry no information and are skipped.
pub fn personalization(groups: &[(f64, &[GameLog])], corpus: &Corpus) -> Vec<Personalization> {
    groups
        .iter()
        .map(|&(alpha, logs)| {
            let xs: Vec<f64> = revealed(logs, corpus)
                .filter_map(|(h, i, _)| normalized_score(h, i))
                .collect();
            Personalization {
                alpha,
                mean_normalized_score: (!xs.is_empty()).then(|| mean(&xs)),
                reveals: xs.len(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tier {
    Low,
    Medium,
    High,
}

impl Tier {
    /// Low below 7.5, high above 8.5.
    pub fn of(avg_score: f64) -> Tier {
        if avg_score < 7.5 {
            Tier::Low
        } else if avg_score <= 8.5 {
            Tier::Medium
        } else {
            Tier::High
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TierTopics {
    pub tier: Tier,
    pub reveals: usize,
    /// Topic bit names with the fraction of reveals setting them, most
    /// frequent first (ties by name), at most `k` entries. Empty when the
    /// tier has no reveals.
    pub topics: Vec<(String, f64)>,
}

/// The `k` most frequent topic bits among revealed reviews, per hotel tier.
pub fn topics_by_tier(logs: &[GameLog], corpus: &Corpus, encoder: &FeatureEncoder, k: usize) -> Vec<TierTopics> {
    let names = encoder.manifest().feature_names();
    let topic_bits: Vec<usize> = (0..names.len()).filter(|&i| names[i].starts_with("topic.")).collect();
    let mut counts: BTreeMap<Tier, (usize, Vec<usize>)> = [Tier::Low, Tier::Medium, Tier::High]
        .into_iter()
        .map(|t| (t, (0, vec![0; topic_bits.len()])))
        .collect();
    for (hotel, i, _) in revealed(logs, corpus) {
        let bits = encoder.hc(&hotel.reviews()[i]);
        let entry = counts.get_mut(&Tier::of(hotel.avg_score())).expect("all tiers present");
        entry.0 += 1;
        for (slot, &b) in entry.1.iter_mut().zip(&topic_bits) {
            *slot += usize::from(bits.get(b));
        }
    }
    counts
        .into_iter()
        .map(|(tier, (reveals, hits))| {
            let mut topics: Vec<(String, f64)> = if reveals == 0 {
                Vec::new()
            } else {
                topic_bits
                    .iter()
                    .zip(&hits)
                    .filter(|(_, &c)| c > 0)
                    .map(|(&b, &c)| (names[b].clone(), c as f64 / reveals as f64))
                    .collect()
            };
            topics.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            topics.truncate(k);
            TierTopics { tier, reveals, topics }
        })
        .collect()
}

/// Rank-tercile bin of a review: for 7 reviews the two lowest-scored are
/// `Low`, the two highest `High` and the middle three `Medium`.
pub fn score_bin(hotel: &Hotel, review: usize) -> Tier {
    let n = hotel.len();
    let outer = ((2 * n) as f64 / 7.0).round() as usize;
    // rank_of: 0 for the highest-scored review.
    let rank = hotel.rank_of(review);
    if rank < outer {
        Tier::High
    } else if rank >= n - outer {
        Tier::Low
    } else {
        Tier::Medium
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BinStats {
    /// Reveals per bin, ordered low, medium, high.
    pub counts: [usize; 3],
    score_sums: [f64; 3],
}

impl BinStats {
    fn push(&mut self, bin: Tier, score: f64) {
        self.counts[bin as usize] += 1;
        self.score_sums[bin as usize] += score;
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn frequencies(&self) -> [f64; 3] {
        let n = self.total().max(1) as f64;
        self.counts.map(|c| c as f64 / n)
    }

    /// Mean revealed score per bin.
    pub fn means(&self) -> [Option<f64>; 3] {
        std::array::from_fn(|i| (self.counts[i] > 0).then(|| self.score_sums[i] / self.counts[i] as f64))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScoreBins {
    pub overall: BinStats,
    pub hotels: BTreeMap<String, BinStats>,
}

/// Distribution of revealed reviews over each hotel's low/medium/high bins.
pub fn score_bins(logs: &[GameLog], corpus: &Corpus) -> ScoreBins {
    let mut out = ScoreBins::default();
    for (hotel, i, r) in revealed(logs, corpus) {
        let bin = score_bin(hotel, i);
        out.overall.push(bin, r.revealed_score);
        out.hotels.entry(hotel.id().to_string()).or_default().push(bin, r.revealed_score);
    }
    out
}
