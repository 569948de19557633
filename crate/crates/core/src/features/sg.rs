//! Statistical game features: the decision-maker's behaviour so far and the
//! numeric facts of the current trial.
//!
//! History features are proportions over the completed trials and are all 0
//! before the first trial completes.

use crate::game::{GameState, HistorySummary, Hotel};

use super::SG_DIM;

pub const SG_NAMES: [&str; SG_DIM] = [
    "HotelAcceptance",
    "HotelAcceptanceEarn",
    "HotelAcceptanceLose",
    "NotHotelAcceptanceEarn",
    "NotHotelAcceptanceLose",
    "BadHotelAcceptance",
    "NotExcellentHotelAcceptance",
    "DMPayoff",
    "LotteryLow",
    "LotteryMed",
    "LotteryHigh",
    "CompletedTrials",
    "GoodHotel",
    "MedHotel",
    "BadHotel",
    "HighScore",
    "MedScore",
    "LowScore",
    "TopReview",
    "BottomReview",
    "CounterfactualPayoff",
];

/// Index constants into [`SgFeatures`].
pub mod idx {
    pub const HOTEL_ACCEPTANCE: usize = 0;
    pub const ACCEPT_EARN: usize = 1;
    pub const ACCEPT_LOSE: usize = 2;
    pub const REJECT_EARN: usize = 3;
    pub const REJECT_LOSE: usize = 4;
    pub const BAD_HOTEL_ACCEPTANCE: usize = 5;
    pub const NOT_EXCELLENT_ACCEPTANCE: usize = 6;
    pub const DM_PAYOFF: usize = 7;
    pub const LOTTERY_LOW: usize = 8;
    pub const LOTTERY_MED: usize = 9;
    pub const LOTTERY_HIGH: usize = 10;
    pub const COMPLETED_TRIALS: usize = 11;
    pub const GOOD_HOTEL: usize = 12;
    pub const MED_HOTEL: usize = 13;
    pub const BAD_HOTEL: usize = 14;
    pub const HIGH_SCORE: usize = 15;
    pub const MED_SCORE: usize = 16;
    pub const LOW_SCORE: usize = 17;
    pub const TOP_REVIEW: usize = 18;
    pub const BOTTOM_REVIEW: usize = 19;
    pub const COUNTERFACTUAL_PAYOFF: usize = 20;
}

/// Reviews ranked this high or better count as top reviews.
pub const TOP_REVIEWS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgFeatures(pub [f64; SG_DIM]);

impl SgFeatures {
    pub fn get(&self, name: &str) -> Option<f64> {
        SG_NAMES.iter().position(|n| *n == name).map(|i| self.0[i])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

fn band(score: f64) -> usize {
    if score >= 8.5 {
        0
    } else if score >= 7.5 {
        1
    } else {
        2
    }
}

/// Features of trial `trial` (one-based) given the history summary.
pub fn sg_from_summary(
    history: &HistorySummary,
    trial: usize,
    horizon: usize,
    hotel: &Hotel,
    review: usize,
) -> SgFeatures {
    let mut f = [0.0; SG_DIM];
    if history.trials > 0 {
        let n = f64::from(history.trials);
        f[idx::HOTEL_ACCEPTANCE] = f64::from(history.accepts) / n;
        f[idx::ACCEPT_EARN] = f64::from(history.accept_earn) / n;
        f[idx::ACCEPT_LOSE] = f64::from(history.accept_lose) / n;
        f[idx::REJECT_EARN] = f64::from(history.reject_earn) / n;
        f[idx::REJECT_LOSE] = f64::from(history.reject_lose) / n;
        f[idx::BAD_HOTEL_ACCEPTANCE] = f64::from(history.bad_hotel_accepts) / n;
        f[idx::NOT_EXCELLENT_ACCEPTANCE] = f64::from(history.excellent_hotel_rejects) / n;
        f[idx::DM_PAYOFF] = history.dm_payoff_sum / n;
        f[idx::LOTTERY_LOW] = f64::from(history.lottery_low) / n;
        f[idx::LOTTERY_MED] = f64::from(history.lottery_med) / n;
        f[idx::LOTTERY_HIGH] = f64::from(history.lottery_high) / n;
        f[idx::COUNTERFACTUAL_PAYOFF] = history.counterfactual_sum / n;
    }
    f[idx::COMPLETED_TRIALS] = (trial - 1) as f64 / horizon as f64;
    f[idx::GOOD_HOTEL + band(hotel.avg_score())] = 1.0;
    let score = hotel.reviews()[review].score;
    f[idx::HIGH_SCORE + band(score)] = 1.0;
    if hotel.rank_of(review) < TOP_REVIEWS {
        f[idx::TOP_REVIEW] = 1.0;
    } else {
        f[idx::BOTTOM_REVIEW] = 1.0;
    }
    SgFeatures(f)
}

/// Features of the current trial of `state` when `review` of `hotel` is revealed.
pub fn sg_features(state: &GameState, hotel: &Hotel, review: usize) -> SgFeatures {
    sg_from_summary(
        state.summary(),
        state.current_trial(),
        state.horizon(),
        hotel,
        review,
    )
}
