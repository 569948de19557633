mod common;

use persuasion::features::sg::SG_NAMES;
use persuasion::features::{sg_features, FeatureEncoder, FeatureManifest, FeatureMode, HC_DIM};
use persuasion::game::{Decision, GameState, Review, TrialRecord};
use persuasion::rng::{seeded, GameRng};
use rand::seq::IndexedRandom;
use rand::Rng;

#[test]
fn sg_features_match_formula_oracle() {
    let mut rng = seeded(2024);
    let start = std::time::Instant::now();
    for case in 0..1000 {
        let past_trials = rng.random_range(0..10);
        let mut state = GameState::with_horizon(10);
        for t in 0..past_trials {
            let h = common::sg::edgy_hotel(&mut rng, &format!("c{case}h{t}"));
            let lottery = h.reviews()[rng.random_range(0..7)].score;
            let d = Decision::from_accept(rng.random_bool(0.55));
            let rec = TrialRecord::new(state.current_trial(), &h, rng.random_range(0..7), d, lottery).unwrap();
            state.apply(rec).unwrap();
        }
        let hotel = common::sg::edgy_hotel(&mut rng, &format!("c{case}now"));
        let review = rng.random_range(0..7);
        let got = sg_features(&state, &hotel, review);
        let want = common::sg::sg_oracle(state.completed(), state.current_trial(), &hotel, review);
        for (i, (g, w)) in got.as_slice().iter().zip(&want).enumerate() {
            assert!(g.to_bits() == w.to_bits(), "case {case}: {} = {g}, oracle {w}", SG_NAMES[i]);
        }
        let bands = |a: usize| got.as_slice()[a..a + 3].iter().sum::<f64>();
        assert_eq!(bands(12), 1.0);
        assert_eq!(bands(15), 1.0);
    }
    assert!(start.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn exactly_three_top_reviews_per_hotel() {
    let mut rng = seeded(9);
    let state = GameState::with_horizon(10);
    for i in 0..300 {
        let h = common::sg::edgy_hotel(&mut rng, &format!("h{i}"));
        let tops: f64 = (0..7).map(|r| sg_features(&state, &h, r).get("TopReview").unwrap()).sum();
        assert_eq!(tops, 3.0);
    }
}

fn normalize(text: &str) -> String {
    let spaced: String = text
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect::<String>()
        .to_lowercase();
    format!(" {} ", spaced.split_whitespace().collect::<Vec<_>>().join(" "))
}

fn mentions(text: &str, phrase: &str) -> bool {
    normalize(text).contains(&normalize(phrase))
}

fn sentences(text: &str) -> usize {
    text.split(['.', '!', '?', '\n']).filter(|s| s.chars().any(char::is_alphanumeric)).count()
}

/// Recomputes every bit by name from the manifest and the raw text.
fn hc_oracle(m: &FeatureManifest, review: &Review) -> Vec<bool> {
    let parts = [("positive", &review.positive_text), ("negative", &review.negative_text)];
    let len = |p: &str| p.chars().count();
    let (pos, neg) = (len(&review.positive_text), len(&review.negative_text));
    m.feature_names()
        .iter()
        .map(|name| {
            let f: Vec<&str> = name.split('.').collect();
            let text = |part: &str| parts.iter().find(|(p, _)| *p == part).unwrap().1.as_str();
            match f[0] {
                "topic" | "intensity" => {
                    let lexes = if f[0] == "topic" { &m.topics } else { &m.intensities };
                    let lex = lexes.iter().find(|l| l.name == f[1]).unwrap();
                    lex.phrases.iter().any(|p| mentions(text(f[2]), p))
                }
                "length" => {
                    let n = len(text(f[2]));
                    match f[1] {
                        "short" => n < m.lengths.short_below,
                        "long" => n >= m.lengths.long_from,
                        _ => n >= m.lengths.short_below && n < m.lengths.long_from,
                    }
                }
                _ => {
                    let share = pos as f64 / (pos + neg) as f64;
                    let d = m.structure.dominant_share;
                    let nonempty = pos + neg > 0;
                    match f[1] {
                        "positive_empty" => pos == 0,
                        "negative_empty" => neg == 0,
                        "positive_longer" => pos > neg,
                        "negative_longer" => neg > pos,
                        "positive_dominant" => nonempty && share >= d,
                        "balanced" => nonempty && share > 1.0 - d && share < d,
                        "negative_dominant" => nonempty && share <= 1.0 - d,
                        "positive_exclamation" => review.positive_text.contains('!'),
                        "negative_exclamation" => review.negative_text.contains('!'),
                        "positive_multi_sentence" => sentences(&review.positive_text) >= 2,
                        "negative_multi_sentence" => sentences(&review.negative_text) >= 2,
                        "long_review" => pos + neg >= m.structure.long_review_from,
                        other => panic!("unknown structural bit {other}"),
                    }
                }
            }
        })
        .collect()
}

fn random_text(rng: &mut GameRng, m: &FeatureManifest) -> String {
    let phrases: Vec<&String> = m.topics.iter().chain(&m.intensities).flat_map(|l| &l.phrases).collect();
    let seps = [" ", ", ", ". ", "! ", "-", "\n", " ... "];
    let n = rng.random_range(0..12);
    let mut s = String::new();
    for _ in 0..n {
        let piece = if rng.random_bool(0.5) {
            let p = phrases.choose(rng).unwrap().to_string();
            if rng.random_bool(0.3) {
                p.to_uppercase()
            } else {
                p
            }
        } else {
            common::text(rng, 4)
        };
        s += &piece;
        s += seps.choose(rng).unwrap();
    }
    s
}

#[test]
fn hc_features_match_naive_oracle() {
    let m = FeatureManifest::default_manifest();
    let enc = FeatureEncoder::new(m.clone(), FeatureMode::Textual);
    let mut rng = seeded(77);
    let mut seen = [false; HC_DIM];
    for i in 0..3000 {
        let review = Review::new(format!("r{i}"), 5.0, random_text(&mut rng, &m), random_text(&mut rng, &m)).unwrap();
        let got = enc.hc(&review);
        let want = hc_oracle(&m, &review);
        for (b, w) in want.iter().enumerate() {
            assert_eq!(got.get(b), *w, "bit {} on {:?}", m.feature_names()[b], review);
            seen[b] |= *w;
        }
    }
    assert!(seen.iter().all(|&s| s), "every bit fires somewhere: {seen:?}");
}

#[test]
fn encoder_dimensions() {
    let m = FeatureManifest::default_manifest();
    assert_eq!(FeatureEncoder::new(m.clone(), FeatureMode::Textual).dim(), 63);
    assert_eq!(FeatureEncoder::new(m, FeatureMode::NumericalOnly).dim(), 21);
}
