//! Model files: JSON documents holding a trained model together with the
//! feature manifest hash, feature mode, training configuration and report.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{AverageValue, DecisionModel, LinearDmm, LinearVm, RecurrentDmm, RecurrentVm, ValueModel};
use crate::features::{FeatureEncoder, FeatureMode};
use crate::neural::{LinearConfig, LinearModel, NeuralError, RecurrentNet, TrainingConfig, TrainingReport};

pub const MODEL_FORMAT: &str = "persuasion-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed model file {path}: {message}")]
    Format { path: String, message: String },
    #[error("{path} was trained with feature manifest {found}, but manifest {expected} is loaded")]
    ManifestMismatch {
        path: String,
        expected: String,
        found: String,
    },
    #[error("model is a {found:?} model where a {expected:?} model is required")]
    WrongRole { expected: ModelRole, found: ModelRole },
    #[error("model uses {found:?} features but the encoder produces {expected:?}")]
    WrongMode { expected: FeatureMode, found: FeatureMode },
    #[error("unknown model role {0:?}")]
    UnknownRole(String),
    #[error("no training data for {0}")]
    EmptyTrainingSet(String),
    #[error(transparent)]
    Neural(#[from] NeuralError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelRole {
    Dmm,
    Vm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    Recurrent {
        net: RecurrentNet,
        config: TrainingConfig,
        report: TrainingReport,
    },
    Linear {
        model: LinearModel,
        config: LinearConfig,
    },
    AverageValue {
        table: Vec<f64>,
    },
}

impl ModelKind {
    fn uses_features(&self) -> bool {
        !matches!(self, ModelKind::AverageValue { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub role: ModelRole,
    pub mode: FeatureMode,
    /// Hex FNV-1a hash of the feature manifest the model was trained with.
    pub manifest_hash: String,
    #[serde(flatten)]
    pub kind: ModelKind,
    /// Evaluation metrics recorded at training time.
    #[serde(default)]
    pub metrics: BTreeMap<String, f64>,
}

impl ModelFile {
    pub fn new(role: ModelRole, encoder: &FeatureEncoder, kind: ModelKind) -> Self {
        ModelFile {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_VERSION,
            role,
            mode: encoder.mode(),
            manifest_hash: format!("{:016x}", encoder.manifest_hash()),
            kind,
            metrics: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files serialise")
    }

    pub fn from_json(text: &str, origin: &str) -> Result<Self, ModelError> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Format {
            path: origin.to_string(),
            message: e.to_string(),
        })?;
        if file.format != MODEL_FORMAT || file.version != MODEL_VERSION {
            return Err(ModelError::Format {
                path: origin.to_string(),
                message: format!("unsupported format {} version {}", file.format, file.version),
            });
        }
        Ok(file)
    }

    /// Writes through a temporary file so readers never see a partial model.
    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        let io = |source| ModelError::Io {
            path: path.display().to_string(),
            source,
        };
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, self.to_json()).map_err(io)?;
        std::fs::rename(&tmp, path).map_err(io)
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text, &path.display().to_string())
    }

    /// Fails unless the file was trained with `encoder`'s manifest and mode.
    pub fn check_encoder(&self, encoder: &FeatureEncoder, origin: &str) -> Result<(), ModelError> {
        if !self.kind.uses_features() {
            return Ok(());
        }
        let expected = format!("{:016x}", encoder.manifest_hash());
        if self.manifest_hash != expected {
            return Err(ModelError::ManifestMismatch {
                path: origin.to_string(),
                expected,
                found: self.manifest_hash.clone(),
            });
        }
        if self.mode != encoder.mode() {
            return Err(ModelError::WrongMode {
                expected: encoder.mode(),
                found: self.mode,
            });
        }
        Ok(())
    }

    pub fn into_dmm(self, name: &str, encoder: Arc<FeatureEncoder>, origin: &str) -> Result<Arc<dyn DecisionModel>, ModelError> {
        if self.role != ModelRole::Dmm {
            return Err(ModelError::WrongRole {
                expected: ModelRole::Dmm,
                found: self.role,
            });
        }
        self.check_encoder(&encoder, origin)?;
        match self.kind {
            ModelKind::Recurrent { net, .. } => {
                check_dim(net.shape().input_dim(), encoder.dim(), origin)?;
                Ok(Arc::new(RecurrentDmm::new(name, net, encoder)))
            }
            ModelKind::Linear { model, .. } => {
                check_dim(model.dim(), encoder.dim(), origin)?;
                Ok(Arc::new(LinearDmm::new(name, model, encoder)))
            }
            ModelKind::AverageValue { .. } => Err(ModelError::Format {
                path: origin.to_string(),
                message: "an average-value table cannot act as a DMM".into(),
            }),
        }
    }

    pub fn into_vm(self, name: &str, encoder: Arc<FeatureEncoder>, origin: &str) -> Result<Arc<dyn ValueModel>, ModelError> {
        if self.role != ModelRole::Vm {
            return Err(ModelError::WrongRole {
                expected: ModelRole::Vm,
                found: self.role,
            });
        }
        self.check_encoder(&encoder, origin)?;
        match self.kind {
            ModelKind::Recurrent { net, .. } => {
                check_dim(net.shape().input_dim(), encoder.dim(), origin)?;
                Ok(Arc::new(RecurrentVm::new(name, net, encoder)))
            }
            ModelKind::Linear { model, .. } => {
                check_dim(model.dim(), encoder.dim(), origin)?;
                Ok(Arc::new(LinearVm::new(name, model, encoder)))
            }
            ModelKind::AverageValue { table } => Ok(Arc::new(AverageValue { table })),
        }
    }
}

fn check_dim(model: usize, encoder: usize, origin: &str) -> Result<(), ModelError> {
    if model == encoder {
        Ok(())
    } else {
        Err(ModelError::Format {
            path: origin.to_string(),
            message: format!("model expects {model} inputs, encoder produces {encoder}"),
        })
    }
}
