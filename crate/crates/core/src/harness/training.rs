//! Training DMM/VM model files from game logs and scoring models on held-out
//! logs.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::metrics::{accuracy, exact_accuracy, macro_f1, rmse};
use crate::dataset::{build_training_sequences, Corpus, DatasetError, GameLog, TrainingSequence};
use crate::features::{FeatureEncoder, FeatureManifest, FeatureMode, HC_DIM, SG_DIM};
use crate::game::GameState;
use crate::models::{
    AverageValue, DecisionModel, Memory, ModelError, ModelFile, ModelKind, ModelRole, RegistryManifest, TrialView, ValueModel,
};
use crate::neural::{linear_model_train, train, Hyper, LinearConfig, LinearObjective, Loss, NeuralError, TrainingConfig};

fn dims(encoder: &FeatureEncoder) -> (usize, usize) {
    match encoder.mode() {
        FeatureMode::Textual => (SG_DIM, HC_DIM),
        FeatureMode::NumericalOnly => (SG_DIM, 0),
    }
}

/// Trains a recurrent model; the loss in `config` is overridden by the role.
pub fn train_recurrent(
    sequences: &[TrainingSequence],
    role: ModelRole,
    encoder: &FeatureEncoder,
    config: &TrainingConfig,
) -> Result<ModelFile, NeuralError> {
    let (data, loss): (Vec<_>, Loss) = match role {
        ModelRole::Dmm => (sequences.iter().map(TrainingSequence::dmm_example).collect(), Loss::BinaryCrossEntropy),
        ModelRole::Vm => (sequences.iter().map(TrainingSequence::vm_example).collect(), Loss::MeanSquaredError),
    };
    let config = TrainingConfig {
        loss,
        ..config.clone()
    };
    let (sg, hc) = dims(encoder);
    let (net, report) = train(&data, sg, hc, &config)?;
    Ok(ModelFile::new(role, encoder, ModelKind::Recurrent { net, config, report }))
}

/// Trains the linear model on individual trials.
pub fn train_linear(
    sequences: &[TrainingSequence],
    role: ModelRole,
    encoder: &FeatureEncoder,
    config: &LinearConfig,
) -> Result<ModelFile, NeuralError> {
    let rows: Vec<Vec<f64>> = sequences.iter().flat_map(|s| s.inputs.iter().cloned()).collect();
    let (targets, objective): (Vec<f64>, _) = match role {
        ModelRole::Dmm => (
            sequences.iter().flat_map(|s| s.dmm_targets.iter().copied()).collect(),
            LinearObjective::Hinge,
        ),
        ModelRole::Vm => (
            sequences.iter().flat_map(|s| s.vm_targets.iter().copied()).collect(),
            LinearObjective::Squared,
        ),
    };
    let model = linear_model_train(&rows, &targets, objective, config)?;
    Ok(ModelFile::new(role, encoder, ModelKind::Linear { model, config: *config }))
}

pub fn train_average_value(logs: &[GameLog], encoder: &FeatureEncoder) -> Result<ModelFile, ModelError> {
    let av = AverageValue::from_games(logs.iter().map(|l| l.records.as_slice()))?;
    Ok(ModelFile::new(ModelRole::Vm, encoder, ModelKind::AverageValue { table: av.table }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DmmMetrics {
    pub accuracy: f64,
    pub macro_f1: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VmMetrics {
    pub exact_accuracy: f64,
    pub rmse: f64,
    pub trials: usize,
}

/// Runs `f` on every logged trial with the state before it and returns the
/// per-trial outputs.
fn replay<T>(
    logs: &[GameLog],
    corpus: &Corpus,
    mut f: impl FnMut(&TrialView<'_>, &mut Memory) -> T,
) -> Result<Vec<Vec<T>>, DatasetError> {
    logs.iter()
        .map(|log| {
            let mut state = GameState::with_horizon(log.records.len());
            let mut memory = Memory::empty();
            let mut out = Vec::with_capacity(log.records.len());
            for r in &log.records {
                let hotel = corpus
                    .hotel(&r.hotel_id)
                    .ok_or_else(|| DatasetError::Data(format!("unknown hotel {}", r.hotel_id)))?;
                let review = hotel
                    .review_index(&r.revealed_review_id)
                    .ok_or_else(|| DatasetError::Data(format!("unknown review {}", r.revealed_review_id)))?;
                out.push(f(&TrialView::new(&state, hotel, review), &mut memory));
                state.apply(r.clone()).map_err(|e| DatasetError::Data(e.to_string()))?;
            }
            Ok(out)
        })
        .collect()
}

/// Accuracy and macro-F1 of the DMM's decisions at threshold 0.5.
pub fn evaluate_dmm(model: &dyn DecisionModel, logs: &[GameLog], corpus: &Corpus) -> Result<DmmMetrics, DatasetError> {
    let probs = replay(logs, corpus, |view, memory| {
        let step = model.step(view, memory);
        *memory = step.memory;
        step.value
    })?;
    let pred: Vec<bool> = probs.iter().flatten().map(|&p| p >= 0.5).collect();
    let truth: Vec<bool> = logs.iter().flat_map(|l| l.records.iter().map(|r| r.decision.is_accept())).collect();
    Ok(DmmMetrics {
        accuracy: accuracy(&pred, &truth),
        macro_f1: macro_f1(&pred, &truth),
        trials: truth.len(),
    })
}

/// Exact accuracy (rounded prediction equals the target) and RMSE of the
/// VM's future-payoff predictions.
pub fn evaluate_vm(model: &dyn ValueModel, logs: &[GameLog], corpus: &Corpus) -> Result<VmMetrics, DatasetError> {
    let preds = replay(logs, corpus, |view, memory| {
        let step = model.step(view, memory);
        *memory = step.memory;
        step.value
    })?;
    let pred: Vec<f64> = preds.into_iter().flatten().collect();
    let truth: Vec<f64> = logs
        .iter()
        .flat_map(|l| {
            let mut future: Vec<f64> = l.records.iter().map(|r| f64::from(r.expert_payoff)).collect();
            for i in (0..future.len().saturating_sub(1)).rev() {
                future[i] += future[i + 1];
            }
            future
        })
        .collect();
    Ok(VmMetrics {
        exact_accuracy: exact_accuracy(&pred, &truth),
        rmse: rmse(&pred, &truth),
        trials: truth.len(),
    })
}

#[derive(Debug, Error)]
pub enum TrainError {
    #[error(transparent)]
    Data(#[from] DatasetError),
    #[error(transparent)]
    Neural(#[from] NeuralError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unknown model role {0}")]
    UnknownRole(String),
}

/// Roles trained by [`train_suite`] unless configured otherwise.
pub const SUITE_ROLES: [&str; 7] = [
    "dmm.hc-lstm",
    "vm.hc-lstm",
    "dmm.sg-lstm",
    "vm.sg-lstm",
    "dmm.linear",
    "vm.linear",
    "vm.av",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub roles: Vec<String>,
    pub recurrent: TrainingConfig,
    pub linear: LinearConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            roles: SUITE_ROLES.iter().map(|s| s.to_string()).collect(),
            recurrent: TrainingConfig::single(
                Loss::BinaryCrossEntropy,
                Hyper {
                    hidden: 32,
                    batch_size: 10,
                    dropout: 0.3,
                },
            )
            .with_epochs(40, 5, 3),
            linear: LinearConfig::default(),
        }
    }
}

/// Trains every role in `config.roles` on `logs`. Role names are
/// `<dmm|vm>.<hc-lstm|sg-lstm|linear|av>`.
pub fn train_suite(
    logs: &[GameLog],
    corpus: &Corpus,
    manifest: &FeatureManifest,
    config: &SuiteConfig,
) -> Result<Vec<(String, ModelFile)>, TrainError> {
    let textual = FeatureEncoder::new(manifest.clone(), FeatureMode::Textual);
    let numerical = FeatureEncoder::new(manifest.clone(), FeatureMode::NumericalOnly);
    let mut cache: HashMap<FeatureMode, Vec<TrainingSequence>> = HashMap::new();
    let mut out = Vec::new();
    for role_name in &config.roles {
        let (role, kind) = match role_name.split_once('.') {
            Some(("dmm", k)) => (ModelRole::Dmm, k),
            Some(("vm", k)) => (ModelRole::Vm, k),
            _ => return Err(TrainError::UnknownRole(role_name.clone())),
        };
        let encoder = if kind == "sg-lstm" { &numerical } else { &textual };
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(encoder.mode()) {
            e.insert(build_training_sequences(logs, corpus, encoder)?);
        }
        let seqs = &cache[&encoder.mode()];
        let file = match (role, kind) {
            (_, "hc-lstm" | "sg-lstm") => train_recurrent(seqs, role, encoder, &config.recurrent)?,
            (_, "linear") => train_linear(seqs, role, encoder, &config.linear)?,
            (ModelRole::Vm, "av") => train_average_value(logs, encoder)?,
            _ => return Err(TrainError::UnknownRole(role_name.clone())),
        };
        out.push((role_name.clone(), file));
    }
    Ok(out)
}

/// Writes each model to `<dir>/<role>.json` and a registry manifest listing
/// them to `<dir>/registry.toml`, which it returns.
pub fn write_suite(dir: &Path, models: &[(String, ModelFile)]) -> Result<PathBuf, ModelError> {
    std::fs::create_dir_all(dir).map_err(|source| ModelError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut manifest = RegistryManifest::default();
    for (role, file) in models {
        let name = format!("{role}.json");
        file.save(&dir.join(&name))?;
        manifest.models.insert(role.clone(), PathBuf::from(name));
    }
    let path = dir.join("registry.toml");
    manifest.save(&path)?;
    Ok(path)
}
