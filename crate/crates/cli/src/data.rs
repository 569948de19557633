//! Loading the inputs a command needs, with errors that name the file.

use std::path::Path;
use std::sync::Arc;

use anyhow::Context;
use persuasion::dataset::{load_game_logs, Corpus, GameLog};
use persuasion::experts::{ExpertRegistry, ExpertSettings};
use persuasion::features::FeatureManifest;
use persuasion::models::ModelRegistry;

use crate::config::{Config, ConfigError};

pub fn manifest(config: &Config) -> anyhow::Result<FeatureManifest> {
    match &config.paths.features {
        Some(p) => FeatureManifest::load(p).with_context(|| format!("feature manifest {}", p.display())),
        None => Ok(FeatureManifest::default_manifest()),
    }
}

pub fn corpus(path: &Path) -> anyhow::Result<Corpus> {
    Corpus::load(path).with_context(|| format!("loading corpus {}", path.display()))
}

/// Game logs at `path`; logs that do not replay are reported and dropped.
pub fn logs(path: &Path, corpus: &Corpus, horizon: usize) -> anyhow::Result<Vec<GameLog>> {
    let set = load_game_logs(path, corpus, horizon).with_context(|| format!("loading game logs {}", path.display()))?;
    for s in &set.skipped {
        eprintln!("warning: {} line {}: skipped game {}: {}", path.display(), s.line, s.game_id, s.reason);
    }
    Ok(set.logs)
}

/// Baselines plus the trained suite when `<models>/registry.toml` exists.
pub fn models(config: &Config) -> anyhow::Result<ModelRegistry> {
    let manifest = manifest(config)?;
    let listing = config.paths.models.join("registry.toml");
    if listing.exists() {
        ModelRegistry::load(&listing, manifest).with_context(|| format!("loading models from {}", listing.display()))
    } else {
        eprintln!(
            "note: no trained models at {}; only baseline models are available",
            listing.display()
        );
        Ok(ModelRegistry::with_baselines(manifest))
    }
}

pub fn experts(models: &ModelRegistry, pool: &Corpus, settings: &ExpertSettings) -> ExpertRegistry {
    ExpertRegistry::new(models, Arc::from(pool.hotels().to_vec()), settings)
}

pub fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError(message()))
    }
}

pub fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
