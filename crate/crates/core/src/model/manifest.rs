//! Declarative description of a batch scoring job.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::align::CostMetric;
use crate::error::{Error, Result};
use crate::model::measure::{InitStrategy, Measure, MeasureConfig};
use crate::preprocess::PreprocessStep;

/// One trajectory pair to score. Relative paths resolve against the
/// manifest's directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairEntry {
    pub pair_id: String,
    pub path_a: PathBuf,
    pub path_b: PathBuf,
    /// Aggregation key, e.g. the model that generated the pair.
    pub group_label: String,
}

/// A measure plus optional overrides of the solver defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub measure: Measure,
    #[serde(default)]
    pub params: ParamOverrides,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_outer_iters: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init: Option<InitStrategy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<CostMetric>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub band: Option<usize>,
}

impl ParamOverrides {
    pub fn apply(&self, mut base: MeasureConfig) -> MeasureConfig {
        if let Some(g) = self.gamma {
            base.gamma = g;
        }
        if let Some(n) = self.max_outer_iters {
            base.max_outer_iters = n;
        }
        if let Some(t) = self.tol {
            base.tol = t;
        }
        if let Some(i) = self.init {
            base.init = i;
        }
        if let Some(m) = self.metric {
            base.metric = m;
        }
        if let Some(b) = self.band {
            base.band = Some(b);
        }
        base
    }
}

/// The batch job: pairs, measures, and an ordered preprocessing chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MotionPairManifest {
    pub entries: Vec<PairEntry>,
    pub measures: Vec<MeasureSpec>,
    #[serde(default)]
    pub preprocessing: Vec<PreprocessStep>,
}

impl MotionPairManifest {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Manifest(e.to_string()))
    }

    /// Loads and validates a manifest. Returns the manifest together with
    /// its base directory for resolving relative paths.
    pub fn load(path: impl AsRef<Path>) -> Result<(Self, PathBuf)> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let manifest = Self::from_json_str(&text)?;
        let base = path
            .parent()
            .map(|p| p.to_path_buf())
            .unwrap_or_else(|| PathBuf::from("."));
        manifest.validate(&base)?;
        Ok((manifest, base))
    }

    /// Checks pair-id uniqueness and that every referenced file exists.
    pub fn validate(&self, base_dir: &Path) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::Manifest("manifest has no entries".into()));
        }
        if self.measures.is_empty() {
            return Err(Error::Manifest("manifest has no measures".into()));
        }
        let mut seen = BTreeSet::new();
        for e in &self.entries {
            if !seen.insert(&e.pair_id) {
                return Err(Error::Manifest(format!(
                    "duplicate pair_id `{}`",
                    e.pair_id
                )));
            }
            for p in [&e.path_a, &e.path_b] {
                let full = resolve(base_dir, p);
                if !full.exists() {
                    return Err(Error::Manifest(format!(
                        "pair `{}` references missing file {}",
                        e.pair_id,
                        full.display()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Resolves a manifest-relative path.
pub fn resolve(base_dir: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base_dir.join(p)
    }
}
