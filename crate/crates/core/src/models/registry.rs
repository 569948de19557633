//! Resolution of models by role name (`dmm.hc-lstm`, `vm.linear`, ...).
//!
//! A registry manifest is a TOML file listing model files relative to its
//! own directory:
//!
//! ```toml
//! [models]
//! "dmm.hc-lstm" = "dmm-hc-lstm.json"
//! "vm.hc-lstm" = "vm-hc-lstm.json"
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{
    DecisionModel, Ewg, HistoryProportion, MaxFuture, ModelError, ModelFile, PreviousDecisions, ValueModel,
};
use crate::features::{FeatureEncoder, FeatureManifest, FeatureMode};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RegistryManifest {
    #[serde(default)]
    pub models: BTreeMap<String, PathBuf>,
}

impl RegistryManifest {
    pub fn load(path: &Path) -> Result<Self, ModelError> {
        let text = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
            path: path.display().to_string(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| ModelError::Format {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        let text = toml::to_string(self).expect("registry manifests serialise");
        std::fs::write(path, text).map_err(|source| ModelError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

/// Shared, immutable set of DMMs and VMs keyed by role name.
#[derive(Clone)]
pub struct ModelRegistry {
    textual: Arc<FeatureEncoder>,
    numerical: Arc<FeatureEncoder>,
    dmms: BTreeMap<String, Arc<dyn DecisionModel>>,
    vms: BTreeMap<String, Arc<dyn ValueModel>>,
}

impl std::fmt::Debug for ModelRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModelRegistry")
            .field("dmms", &self.dmms.keys().collect::<Vec<_>>())
            .field("vms", &self.vms.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl ModelRegistry {
    /// A registry holding only the untrained baselines.
    pub fn with_baselines(manifest: FeatureManifest) -> Self {
        let mut r = ModelRegistry {
            numerical: Arc::new(FeatureEncoder::new(manifest.clone(), FeatureMode::NumericalOnly)),
            textual: Arc::new(FeatureEncoder::new(manifest, FeatureMode::Textual)),
            dmms: BTreeMap::new(),
            vms: BTreeMap::new(),
        };
        r.register_dmm("dmm.ewg", Arc::new(Ewg::default()));
        r.register_dmm("dmm.pd", Arc::new(PreviousDecisions));
        r.register_vm("vm.mfo", Arc::new(MaxFuture));
        r.register_vm("vm.hp", Arc::new(HistoryProportion::default()));
        r
    }

    /// Baselines plus every model listed in the registry manifest at `path`.
    pub fn load(path: &Path, manifest: FeatureManifest) -> Result<Self, ModelError> {
        let listing = RegistryManifest::load(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let mut r = Self::with_baselines(manifest);
        for (role, file) in &listing.models {
            r.load_model(role, &base.join(file))?;
        }
        Ok(r)
    }

    /// Loads one model file under `role`; the role prefix decides DMM or VM.
    pub fn load_model(&mut self, role: &str, path: &Path) -> Result<(), ModelError> {
        let origin = path.display().to_string();
        let file = ModelFile::load(path)?;
        let encoder = self.encoder(file.mode).clone();
        if role.starts_with("dmm.") {
            let m = file.into_dmm(role, encoder, &origin)?;
            self.register_dmm(role, m);
        } else if role.starts_with("vm.") {
            let m = file.into_vm(role, encoder, &origin)?;
            self.register_vm(role, m);
        } else {
            return Err(ModelError::UnknownRole(role.to_string()));
        }
        Ok(())
    }

    pub fn encoder(&self, mode: FeatureMode) -> &Arc<FeatureEncoder> {
        match mode {
            FeatureMode::Textual => &self.textual,
            FeatureMode::NumericalOnly => &self.numerical,
        }
    }

    pub fn manifest(&self) -> &FeatureManifest {
        self.textual.manifest()
    }

    pub fn register_dmm(&mut self, role: &str, model: Arc<dyn DecisionModel>) {
        self.dmms.insert(role.to_string(), model);
    }

    pub fn register_vm(&mut self, role: &str, model: Arc<dyn ValueModel>) {
        self.vms.insert(role.to_string(), model);
    }

    pub fn dmm(&self, role: &str) -> Result<Arc<dyn DecisionModel>, ModelError> {
        self.dmms.get(role).cloned().ok_or_else(|| ModelError::UnknownRole(role.to_string()))
    }

    pub fn vm(&self, role: &str) -> Result<Arc<dyn ValueModel>, ModelError> {
        self.vms.get(role).cloned().ok_or_else(|| ModelError::UnknownRole(role.to_string()))
    }

    pub fn dmm_roles(&self) -> impl Iterator<Item = &str> {
        self.dmms.keys().map(String::as_str)
    }

    pub fn vm_roles(&self) -> impl Iterator<Item = &str> {
        self.vms.keys().map(String::as_str)
    }
}
