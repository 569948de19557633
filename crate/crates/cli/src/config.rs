//! The run configuration: one TOML file plus `key.path=value` overrides.

use std::path::{Path, PathBuf};

use persuasion::dataset::Archetype;
use persuasion::experts::ExpertSettings;
use persuasion::harness::{SuiteConfig, TournamentConfig};
use serde::{Deserialize, Serialize};

/// Raised for anything wrong with the configuration itself; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub paths: Paths,
    pub generate: GenerateConfig,
    pub train: SuiteConfig,
    pub experts: ExpertSettings,
    pub tournament: TournamentConfig,
    pub sweep: Sweep,
    pub analyze: AnalyzeConfig,
    pub serve: ServeConfig,
    pub play: PlayConfig,
}

/// File locations, relative to the working directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub train_corpus: PathBuf,
    pub test_corpus: PathBuf,
    pub train_logs: PathBuf,
    pub test_logs: PathBuf,
    /// Directory holding `registry.toml` and the model files.
    pub models: PathBuf,
    /// Feature manifest; the built-in one when absent.
    pub features: Option<PathBuf>,
    pub results: PathBuf,
}

impl Default for Paths {
    fn default() -> Self {
        Paths {
            train_corpus: "data/train_corpus.jsonl".into(),
            test_corpus: "data/test_corpus.jsonl".into(),
            train_logs: "data/train_logs.jsonl".into(),
            test_logs: "data/test_logs.jsonl".into(),
            models: "models".into(),
            features: None,
            results: "results".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerateConfig {
    pub seed: u64,
    pub hotels: usize,
    /// Share of hotels held out for evaluation and tournaments.
    pub test_fraction: f64,
    pub train_games: usize,
    pub test_games: usize,
    pub horizon: usize,
    pub archetype: Archetype,
    pub experts: Vec<String>,
}

impl Default for GenerateConfig {
    fn default() -> Self {
        let base = persuasion::dataset::SyntheticConfig::default();
        GenerateConfig {
            seed: base.seed,
            hotels: base.hotels,
            test_fraction: 0.25,
            train_games: base.games,
            test_games: 100,
            horizon: base.horizon,
            archetype: base.archetype,
            experts: base.experts,
        }
    }
}

/// Grid the `tournament` command runs; empty lists fall back to the single
/// expert and alpha of `[tournament]`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sweep {
    pub experts: Vec<String>,
    pub alphas: Vec<f64>,
    /// Write per-game CSV rows for every run.
    pub csv: bool,
    /// Write every run's games as JSONL game logs.
    pub logs: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyzeConfig {
    pub experts: Vec<String>,
    pub alphas: Vec<f64>,
    /// Topics listed per hotel tier.
    pub top_topics: usize,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        AnalyzeConfig {
            experts: ["rand", "median", "highest", "extremist", "a-liar", "ptd-hc", "ae"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            alphas: vec![-0.2, -0.1, 0.0, 0.1, 0.2],
            top_topics: 5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServeConfig {
    pub addr: String,
    pub default_expert: String,
    pub ttl_secs: u64,
    pub lottery_visible: bool,
    pub journal: Option<PathBuf>,
    pub workers: usize,
    pub cors_origin: Option<String>,
    /// Planning time per trial for search-based experts.
    pub think_ms: u64,
    pub max_iterations: u64,
}

impl Default for ServeConfig {
    fn default() -> Self {
        ServeConfig {
            addr: "127.0.0.1:8080".into(),
            default_expert: "ae".into(),
            ttl_secs: 3600,
            lottery_visible: true,
            journal: None,
            workers: 4,
            cors_origin: None,
            think_ms: 5000,
            max_iterations: 200_000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlayConfig {
    pub expert: String,
    /// Random when absent.
    pub seed: Option<u64>,
    pub lottery_visible: bool,
    pub think_ms: u64,
    pub max_iterations: u64,
}

impl Default for PlayConfig {
    fn default() -> Self {
        PlayConfig {
            expert: "ae".into(),
            seed: None,
            lottery_visible: true,
            think_ms: 2000,
            max_iterations: 100_000,
        }
    }
}

impl Config {
    /// Reads `path` (defaults only when `None`) and applies `overrides`.
    ///
    /// Both are merged key by key into the serialized defaults, so setting
    /// one field of a nested section keeps that section's other defaults.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Config, ConfigError> {
        let mut table = toml::Table::try_from(Config::default())
            .map_err(|e| ConfigError(format!("serializing defaults: {e}")))?;
        if let Some(p) = path {
            let text =
                std::fs::read_to_string(p).map_err(|e| ConfigError(format!("cannot read {}: {e}", p.display())))?;
            let file = text
                .parse::<toml::Table>()
                .map_err(|e| ConfigError(format!("{}: {e}", p.display())))?;
            merge(&mut table, file);
        }
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| ConfigError(e.message().to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("configs serialise")
    }
}

/// Overlays `top` on `base`, descending into tables present in both.
fn merge(base: &mut toml::Table, top: toml::Table) {
    for (k, v) in top {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(t)) => merge(b, t),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// Sets `a.b.c=value` in `table`. The value is read as a TOML literal and
/// falls back to a plain string, so `expert=ae` needs no quotes.
fn apply_override(table: &mut toml::Table, spec: &str) -> Result<(), ConfigError> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| ConfigError(format!("override {spec:?} is not key=value")))?;
    let value = parse_value(raw.trim());
    let parts: Vec<&str> = key.trim().split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(ConfigError(format!("bad override key {key:?}")));
    }
    let mut node: &toml::Table = table;
    for p in &parts[..parts.len() - 1] {
        match node.get(*p) {
            Some(toml::Value::Table(t)) => node = t,
            Some(_) => return Err(ConfigError(format!("override {key:?}: {p} is not a table"))),
            None => break,
        }
    }
    let mut top = toml::Table::new();
    top.insert(parts[parts.len() - 1].to_string(), value);
    for p in parts[..parts.len() - 1].iter().rev() {
        let mut t = toml::Table::new();
        t.insert(p.to_string(), toml::Value::Table(top));
        top = t;
    }
    merge(table, top);
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}
