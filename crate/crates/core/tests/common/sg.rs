//! Per-formula oracle for the statistical game features.
#![allow(clippy::manual_range_contains)]

use persuasion::features::sg::SG_NAMES;
use persuasion::features::SG_DIM;
use persuasion::game::{Decision, Hotel, Review, TrialRecord};
use persuasion::rng::GameRng;
use rand::seq::IndexedRandom;
use rand::Rng;

fn ind(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Straight transcription of each formula over the records of trials
/// 1..t-1. Proportions are 0 before the first trial completes.
pub fn sg_oracle(past: &[TrialRecord], t: usize, hotel: &Hotel, review: usize) -> Vec<f64> {
    let n = past.len() as f64;
    let prop = |pred: &dyn Fn(&TrialRecord) -> bool| {
        if past.is_empty() {
            0.0
        } else {
            past.iter().filter(|r| pred(r)).count() as f64 / n
        }
    };
    let avg = |val: &dyn Fn(&TrialRecord) -> f64| {
        if past.is_empty() {
            0.0
        } else {
            let mut s = 0.0;
            for r in past {
                s += val(r);
            }
            s / n
        }
    };
    let acc = |r: &TrialRecord| r.decision == Decision::Accept;
    // Payoff the DM got, or would have got had it accepted.
    let dmp = |r: &TrialRecord| r.lottery_result - 8.0;
    let s_h = hotel.avg_score();
    let s_r = hotel.reviews()[review].score;
    let mut order: Vec<usize> = (0..hotel.len()).collect();
    order.sort_by(|&a, &b| hotel.reviews()[b].score.total_cmp(&hotel.reviews()[a].score).then(a.cmp(&b)));
    let top = order[..3].contains(&review);

    let values = [
        ("HotelAcceptance", prop(&|r| acc(r))),
        ("HotelAcceptanceEarn", prop(&|r| acc(r) && dmp(r) > 0.0)),
        ("HotelAcceptanceLose", prop(&|r| acc(r) && dmp(r) < 0.0)),
        ("NotHotelAcceptanceEarn", prop(&|r| !acc(r) && dmp(r) > 0.0)),
        ("NotHotelAcceptanceLose", prop(&|r| !acc(r) && dmp(r) < 0.0)),
        ("BadHotelAcceptance", prop(&|r| acc(r) && r.hotel_score < 7.5)),
        ("NotExcellentHotelAcceptance", prop(&|r| !acc(r) && r.hotel_score > 9.5)),
        ("DMPayoff", avg(&|r| if acc(r) { r.lottery_result - 8.0 } else { 0.0 })),
        ("LotteryLow", prop(&|r| r.lottery_result < 3.0)),
        ("LotteryMed", prop(&|r| r.lottery_result >= 3.0 && r.lottery_result < 5.0)),
        ("LotteryHigh", prop(&|r| r.lottery_result >= 8.0)),
        ("CompletedTrials", (t - 1) as f64 / 10.0),
        ("GoodHotel", ind(s_h >= 8.5)),
        ("MedHotel", ind(s_h < 8.5 && s_h >= 7.5)),
        ("BadHotel", ind(s_h < 7.5)),
        ("HighScore", ind(s_r >= 8.5)),
        ("MedScore", ind(s_r < 8.5 && s_r >= 7.5)),
        ("LowScore", ind(s_r < 7.5)),
        ("TopReview", ind(top)),
        ("BottomReview", ind(!top)),
        ("CounterfactualPayoff", avg(&|r| r.lottery_result - 8.0)),
    ];
    assert_eq!(values.len(), SG_DIM);
    values
        .iter()
        .zip(SG_NAMES)
        .map(|((name, v), expected)| {
            assert_eq!(*name, expected, "oracle order");
            *v
        })
        .collect()
}

/// Scores drawn to land on the formula boundaries often.
pub fn edgy_hotel(rng: &mut GameRng, id: &str) -> Hotel {
    const GRID: [f64; 12] = [2.5, 2.9, 3.0, 4.9, 5.0, 7.5, 7.9, 8.0, 8.5, 9.5, 9.6, 10.0];
    if rng.random_bool(0.5) {
        return super::random_hotel(rng, id);
    }
    let flat = rng.random_bool(0.2).then(|| *GRID.choose(rng).unwrap());
    let reviews = (0..7)
        .map(|i| {
            let s = flat.unwrap_or_else(|| *GRID.choose(rng).unwrap());
            Review::new(format!("{id}-r{i}"), s, "", "").unwrap()
        })
        .collect();
    Hotel::new(id, reviews).unwrap()
}
