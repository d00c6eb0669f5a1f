//! Study configuration: a TOML document mirroring the report fields.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

/// One study run: which example, which scales, which resolutions, and the
/// tolerances the run is expected to meet.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StudyConfig {
    pub study: String,
    #[serde(default)]
    pub example: String,
    /// Smoothing scales, largest first.
    #[serde(default)]
    pub eps: Vec<f64>,
    /// Nodes per axis for grids and quadratures.
    #[serde(default = "default_grid")]
    pub grid: usize,
    /// Builder parameters for the example.
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// Free-form per-study options (mode names, probe counts, windows).
    #[serde(default)]
    pub options: BTreeMap<String, String>,
    /// Named tolerances; a study fails when a declared tolerance is missed.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

fn default_grid() -> usize {
    33
}

impl StudyConfig {
    pub fn new(study: &str, example: &str) -> Self {
        StudyConfig {
            study: study.into(),
            example: example.into(),
            eps: vec![0.2, 0.1, 0.05],
            grid: default_grid(),
            params: BTreeMap::new(),
            options: BTreeMap::new(),
            tolerances: BTreeMap::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, toml::to_string_pretty(self)?)
            .with_context(|| format!("writing config {}", path.display()))?;
        Ok(())
    }

    pub fn opt(&self, key: &str, default: &str) -> String {
        self.options.get(key).cloned().unwrap_or_else(|| default.to_string())
    }

    pub fn opt_f64(&self, key: &str, default: f64) -> f64 {
        self.options.get(key).and_then(|s| s.parse().ok()).unwrap_or(default)
    }

    pub fn opt_usize(&self, key: &str, default: usize) -> usize {
        self.options.get(key).and_then(|s| s.parse().ok()).unwrap_or(default)
    }

    pub fn core_params(&self) -> geomolt_core::examples::Params {
        let mut p = geomolt_core::examples::Params::new();
        for (k, v) in &self.params {
            p = p.set(k, *v);
        }
        p
    }
}
