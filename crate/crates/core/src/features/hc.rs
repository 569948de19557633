//! Hand-crafted binary text features.

use std::collections::HashMap;

use super::manifest::{FeatureManifest, Lexicon, Structural};
use super::HC_DIM;
use crate::game::Review;

/// Exactly [`HC_DIM`] bits, bit `i` is feature `i` of the manifest.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct HcFeatures(u64);

impl HcFeatures {
    pub fn from_bits(bits: u64) -> Self {
        HcFeatures(bits & ((1u64 << HC_DIM) - 1))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn get(self, index: usize) -> bool {
        index < HC_DIM && self.0 >> index & 1 == 1
    }

    fn set(&mut self, index: usize, on: bool) {
        if on {
            self.0 |= 1 << index;
        }
    }

    pub fn count_ones(self) -> u32 {
        self.0.count_ones()
    }

    pub fn write_f64(self, out: &mut [f64]) {
        for (i, v) in out.iter_mut().enumerate().take(HC_DIM) {
            *v = if self.get(i) { 1.0 } else { 0.0 };
        }
    }

    pub fn to_vec(self) -> Vec<f64> {
        let mut v = vec![0.0; HC_DIM];
        self.write_f64(&mut v);
        v
    }
}

/// Lower-cased words; anything that is not alphanumeric separates words.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn sentence_count(text: &str) -> usize {
    text.split(['.', '!', '?', '\n'])
        .filter(|s| s.chars().any(char::is_alphanumeric))
        .count()
}

/// Phrase lists indexed by first word, for one scan per review part.
#[derive(Debug, Clone)]
struct PhraseIndex {
    by_first: HashMap<String, Vec<(Vec<String>, usize)>>,
    groups: usize,
}

impl PhraseIndex {
    fn new(lexicons: &[Lexicon]) -> Self {
        let mut by_first: HashMap<String, Vec<(Vec<String>, usize)>> = HashMap::new();
        for (g, lex) in lexicons.iter().enumerate() {
            for p in &lex.phrases {
                let toks = tokenize(p);
                if let Some(first) = toks.first() {
                    by_first.entry(first.clone()).or_default().push((toks, g));
                }
            }
        }
        PhraseIndex {
            by_first,
            groups: lexicons.len(),
        }
    }

    fn hits(&self, tokens: &[String]) -> Vec<bool> {
        let mut hit = vec![false; self.groups];
        for (i, tok) in tokens.iter().enumerate() {
            if let Some(cands) = self.by_first.get(tok) {
                for (phrase, g) in cands {
                    if !hit[*g] && tokens[i..].starts_with(phrase) {
                        hit[*g] = true;
                    }
                }
            }
        }
        hit
    }
}

/// A manifest compiled for fast extraction.
#[derive(Debug, Clone)]
pub struct HcExtractor {
    manifest: FeatureManifest,
    topics: PhraseIndex,
    intensities: PhraseIndex,
}

impl HcExtractor {
    pub fn new(manifest: FeatureManifest) -> Self {
        let topics = PhraseIndex::new(&manifest.topics);
        let intensities = PhraseIndex::new(&manifest.intensities);
        HcExtractor {
            manifest,
            topics,
            intensities,
        }
    }

    pub fn manifest(&self) -> &FeatureManifest {
        &self.manifest
    }

    pub fn extract(&self, review: &Review) -> HcFeatures {
        let m = &self.manifest;
        let parts = [review.positive_text.as_str(), review.negative_text.as_str()];
        let tokens = parts.map(tokenize);
        let lens = parts.map(|p| p.chars().count());
        let n_topics = m.topics.len();
        let n_int = m.intensities.len();

        let mut out = HcFeatures::default();
        let mut bit = 0;
        for toks in &tokens {
            for h in self.topics.hits(toks) {
                out.set(bit, h);
                bit += 1;
            }
        }
        debug_assert_eq!(bit, 2 * n_topics);
        for &len in &lens {
            let cat = if len < m.lengths.short_below {
                0
            } else if len >= m.lengths.long_from {
                2
            } else {
                1
            };
            for c in 0..3 {
                out.set(bit + c, c == cat);
            }
            bit += 3;
        }
        for toks in &tokens {
            for h in self.intensities.hits(toks) {
                out.set(bit, h);
                bit += 1;
            }
        }
        debug_assert_eq!(bit, 2 * n_topics + 6 + 2 * n_int);

        let (pos, neg) = (lens[0], lens[1]);
        let total = pos + neg;
        let share = (total > 0).then(|| pos as f64 / total as f64);
        let d = m.structure.dominant_share;
        for s in &m.structure.structural {
            let on = match s {
                Structural::PositiveEmpty => pos == 0,
                Structural::NegativeEmpty => neg == 0,
                Structural::PositiveLonger => pos > neg,
                Structural::NegativeLonger => neg > pos,
                Structural::PositiveDominant => share.is_some_and(|x| x >= d),
                Structural::Balanced => share.is_some_and(|x| x > 1.0 - d && x < d),
                Structural::NegativeDominant => share.is_some_and(|x| x <= 1.0 - d),
                Structural::PositiveExclamation => parts[0].contains('!'),
                Structural::NegativeExclamation => parts[1].contains('!'),
                Structural::PositiveMultiSentence => sentence_count(parts[0]) >= 2,
                Structural::NegativeMultiSentence => sentence_count(parts[1]) >= 2,
                Structural::LongReview => total >= m.structure.long_review_from,
            };
            out.set(bit, on);
            bit += 1;
        }
        out
    }
}

/// One-off extraction; prefer a reused [`HcExtractor`] in loops.
pub fn hc_features(review: &Review, manifest: &FeatureManifest) -> HcFeatures {
    HcExtractor::new(manifest.clone()).extract(review)
}
