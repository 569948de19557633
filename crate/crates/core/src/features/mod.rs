//! Per-trial feature vectors: statistical game (SG) features followed, in
//! textual mode, by the hand-crafted (HC) review bits.

pub mod hc;
pub mod manifest;
pub mod sg;

use std::collections::HashMap;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::game::{GameState, HistorySummary, Hotel, Review};

pub use hc::{hc_features, HcExtractor, HcFeatures};
pub use manifest::{FeatureManifest, ManifestError};
pub use sg::{sg_features, sg_from_summary, SgFeatures, SG_NAMES};

pub const SG_DIM: usize = 21;
pub const HC_DIM: usize = 42;

pub type FeatureVector = Vec<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureMode {
    /// SG then HC features.
    Textual,
    /// SG features only, for games where only a score is communicated.
    NumericalOnly,
}

impl FeatureMode {
    pub fn dim(self) -> usize {
        match self {
            FeatureMode::Textual => SG_DIM + HC_DIM,
            FeatureMode::NumericalOnly => SG_DIM,
        }
    }
}

/// Builds trial vectors for one manifest and mode. HC bits are cached per
/// review, so an encoder should be shared rather than rebuilt.
#[derive(Debug)]
pub struct FeatureEncoder {
    extractor: HcExtractor,
    mode: FeatureMode,
    manifest_hash: u64,
    cache: RwLock<HashMap<String, (usize, usize, HcFeatures)>>,
}

impl FeatureEncoder {
    pub fn new(manifest: FeatureManifest, mode: FeatureMode) -> Self {
        let manifest_hash = manifest.hash();
        FeatureEncoder {
            extractor: HcExtractor::new(manifest),
            mode,
            manifest_hash,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn default_textual() -> Self {
        Self::new(FeatureManifest::default_manifest(), FeatureMode::Textual)
    }

    pub fn mode(&self) -> FeatureMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.mode.dim()
    }

    pub fn manifest(&self) -> &FeatureManifest {
        self.extractor.manifest()
    }

    pub fn manifest_hash(&self) -> u64 {
        self.manifest_hash
    }

    pub fn hc(&self, review: &Review) -> HcFeatures {
        let key = (review.positive_text.len(), review.negative_text.len());
        if let Some(&(p, n, f)) = self.cache.read().get(&review.id) {
            if (p, n) == key {
                return f;
            }
        }
        let f = self.extractor.extract(review);
        self.cache
            .write()
            .insert(review.id.clone(), (key.0, key.1, f));
        f
    }

    /// Writes the vector for revealing `review` of `hotel` at one-based `trial`.
    pub fn encode_into(
        &self,
        history: &HistorySummary,
        trial: usize,
        horizon: usize,
        hotel: &Hotel,
        review: usize,
        out: &mut [f64],
    ) {
        assert_eq!(out.len(), self.dim(), "feature buffer has the wrong length");
        let sg = sg_from_summary(history, trial, horizon, hotel, review);
        out[..SG_DIM].copy_from_slice(&sg.0);
        if self.mode == FeatureMode::Textual {
            self.hc(&hotel.reviews()[review])
                .write_f64(&mut out[SG_DIM..]);
        }
    }

    pub fn encode(
        &self,
        history: &HistorySummary,
        trial: usize,
        horizon: usize,
        hotel: &Hotel,
        review: usize,
    ) -> FeatureVector {
        let mut v = vec![0.0; self.dim()];
        self.encode_into(history, trial, horizon, hotel, review, &mut v);
        v
    }

    /// The vector for the current trial of `state`.
    pub fn trial_vector(&self, state: &GameState, hotel: &Hotel, review: usize) -> FeatureVector {
        self.encode(
            state.summary(),
            state.current_trial(),
            state.horizon(),
            hotel,
            review,
        )
    }
}

/// Free-function form of [`FeatureEncoder::trial_vector`].
pub fn trial_vector(
    state: &GameState,
    hotel: &Hotel,
    review: usize,
    manifest: &FeatureManifest,
    mode: FeatureMode,
) -> FeatureVector {
    FeatureEncoder::new(manifest.clone(), mode).trial_vector(state, hotel, review)
}
