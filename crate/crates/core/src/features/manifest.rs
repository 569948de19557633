//! The versioned description of the hand-crafted feature bits.
//!
//! The manifest hash is FNV-1a (64-bit, offset basis `0xcbf29ce484222325`,
//! prime `0x100000001b3`) over the compact JSON rendering of the parsed
//! manifest, so comments and whitespace in the TOML file do not affect it
//! but any change to names, phrases or thresholds does.

use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

use super::HC_DIM;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;
const DEFAULT_MANIFEST: &str = include_str!("../../data/hc_manifest.toml");

/// The two halves of a review.
pub const PARTS: [&str; 2] = ["positive", "negative"];
pub const LENGTH_CATEGORIES: [&str; 3] = ["short", "medium", "long"];

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read manifest {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("manifest parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("unsupported manifest schema version {0}")]
    Version(u32),
    #[error("invalid manifest: {0}")]
    Invalid(String),
}

/// Whole-review properties that can be listed under `structure.structural`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structural {
    PositiveEmpty,
    NegativeEmpty,
    PositiveLonger,
    NegativeLonger,
    PositiveDominant,
    Balanced,
    NegativeDominant,
    PositiveExclamation,
    NegativeExclamation,
    PositiveMultiSentence,
    NegativeMultiSentence,
    LongReview,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lexicon {
    pub name: String,
    pub phrases: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthThresholds {
    pub short_below: usize,
    pub long_from: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureConfig {
    pub dominant_share: f64,
    pub long_review_from: usize,
    pub structural: Vec<Structural>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureManifest {
    pub schema_version: u32,
    pub name: String,
    pub lengths: LengthThresholds,
    pub structure: StructureConfig,
    #[serde(rename = "topic")]
    pub topics: Vec<Lexicon>,
    #[serde(rename = "intensity")]
    pub intensities: Vec<Lexicon>,
}

impl FeatureManifest {
    pub fn default_manifest() -> Self {
        Self::from_toml(DEFAULT_MANIFEST).expect("bundled manifest is valid")
    }

    pub fn from_toml(text: &str) -> Result<Self, ManifestError> {
        let m: FeatureManifest = toml::from_str(text)?;
        m.validate()?;
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ManifestError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), ManifestError> {
        if self.schema_version != MANIFEST_SCHEMA_VERSION {
            return Err(ManifestError::Version(self.schema_version));
        }
        if self.lengths.short_below > self.lengths.long_from {
            return Err(ManifestError::Invalid(
                "lengths.short_below exceeds lengths.long_from".into(),
            ));
        }
        let d = self.structure.dominant_share;
        if !(0.5..1.0).contains(&d) {
            return Err(ManifestError::Invalid(format!(
                "structure.dominant_share {d} must lie in [0.5, 1)"
            )));
        }
        let mut seen = Vec::new();
        for s in &self.structure.structural {
            if seen.contains(s) {
                return Err(ManifestError::Invalid(format!("structural bit {s:?} listed twice")));
            }
            seen.push(*s);
        }
        for lex in self.topics.iter().chain(&self.intensities) {
            if lex.phrases.iter().all(|p| super::hc::tokenize(p).is_empty()) {
                return Err(ManifestError::Invalid(format!("lexicon {} has no words", lex.name)));
            }
        }
        let names = self.feature_names();
        if names.len() != HC_DIM {
            return Err(ManifestError::Invalid(format!(
                "manifest describes {} bits, expected {HC_DIM}",
                names.len()
            )));
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(ManifestError::Invalid("duplicate feature names".into()));
        }
        Ok(())
    }

    /// Bit names in bit order.
    pub fn feature_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(HC_DIM);
        for part in PARTS {
            for t in &self.topics {
                names.push(format!("topic.{}.{part}", t.name));
            }
        }
        for part in PARTS {
            for c in LENGTH_CATEGORIES {
                names.push(format!("length.{c}.{part}"));
            }
        }
        for part in PARTS {
            for i in &self.intensities {
                names.push(format!("intensity.{}.{part}", i.name));
            }
        }
        for s in &self.structure.structural {
            let v = serde_json::to_value(s).expect("enum serialises");
            names.push(format!("structure.{}", v.as_str().unwrap_or_default()));
        }
        names
    }

    /// Stable 64-bit compatibility key recorded in every trained model.
    pub fn hash(&self) -> u64 {
        let canonical = serde_json::to_vec(self).expect("manifest serialises");
        fnv1a64(&canonical)
    }

    pub fn hash_hex(&self) -> String {
        format!("{:016x}", self.hash())
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_manifest_has_42_named_bits() {
        let m = FeatureManifest::default_manifest();
        let names = m.feature_names();
        assert_eq!(names.len(), 42);
        assert_eq!(names[0], "topic.location.positive");
        assert_eq!(names[9], "topic.location.negative");
        assert_eq!(names[41], "structure.long_review");
    }

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a64(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a64(b"a"), 0xaf63_dc4c_8601_ec8c);
    }

    #[test]
    fn hash_ignores_comments_but_not_content() {
        let base = FeatureManifest::default_manifest();
        let commented = format!("# extra comment\n{DEFAULT_MANIFEST}");
        assert_eq!(FeatureManifest::from_toml(&commented).unwrap().hash(), base.hash());

        let mut changed = base.clone();
        changed.topics[0].phrases.push("downtown".into());
        assert_ne!(changed.hash(), base.hash());
    }

    #[test]
    fn wrong_bit_count_is_rejected() {
        let mut m = FeatureManifest::default_manifest();
        m.structure.structural.pop();
        assert!(matches!(m.validate(), Err(ManifestError::Invalid(_))));
        let mut m = FeatureManifest::default_manifest();
        m.schema_version = 2;
        assert!(matches!(m.validate(), Err(ManifestError::Version(2))));
    }
}
