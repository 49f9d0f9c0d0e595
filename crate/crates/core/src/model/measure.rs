//! Measure identifiers, solver configuration, and scored results.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::align::CostMetric;
use crate::error::{Error, Result};
use crate::model::AlignmentPath;

/// The similarity measures exposed by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Dtw,
    SoftDtw,
    Gdtw,
    SoftGdtw,
    DtwGi,
    SoftDtwGi,
    Ctw,
}

impl Measure {
    pub const ALL: [Measure; 7] = [
        Measure::Dtw,
        Measure::SoftDtw,
        Measure::Gdtw,
        Measure::SoftGdtw,
        Measure::DtwGi,
        Measure::SoftDtwGi,
        Measure::Ctw,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Measure::Dtw => "dtw",
            Measure::SoftDtw => "soft_dtw",
            Measure::Gdtw => "gdtw",
            Measure::SoftGdtw => "soft_gdtw",
            Measure::DtwGi => "dtw_gi",
            Measure::SoftDtwGi => "soft_dtw_gi",
            Measure::Ctw => "ctw",
        }
    }

    /// True for the measures whose inner alignment is softened by `gamma`.
    pub fn is_soft(&self) -> bool {
        matches!(
            self,
            Measure::SoftDtw | Measure::SoftGdtw | Measure::SoftDtwGi
        )
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .iter()
            .find(|m| m.name() == s)
            .copied()
            .ok_or_else(|| {
                let names: Vec<&str> = Measure::ALL.iter().map(|m| m.name()).collect();
                Error::Parameter(format!(
                    "unknown measure `{s}`; valid measures: {}",
                    names.join(", ")
                ))
            })
    }
}

/// Initialization of the iterative solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitStrategy {
    /// Linearly resampled index correspondence (the intended-correspondence
    /// prior for demonstration pairs).
    DiagonalPath,
    /// Uniform coupling over all index pairs.
    Uniform,
}

impl InitStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            InitStrategy::DiagonalPath => "diagonal_path",
            InitStrategy::Uniform => "uniform",
        }
    }
}

/// Solver knobs shared by every measure. Defaults are the centralized
/// values echoed into every result for replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MeasureConfig {
    /// Smoothing for the soft variants.
    pub gamma: f64,
    /// Outer-iteration budget of the alternating solvers.
    pub max_outer_iters: usize,
    /// Relative objective-change threshold for convergence.
    pub tol: f64,
    /// Initial coupling of the iterative solvers.
    pub init: InitStrategy,
    /// Ground metric for the homogeneous-dimension kernels.
    pub metric: CostMetric,
    /// Optional Sakoe-Chiba band radius (in cells, at least 1).
    pub band: Option<usize>,
}

pub const DEFAULT_GAMMA: f64 = 0.1;
pub const DEFAULT_MAX_OUTER_ITERS: usize = 30;
pub const DEFAULT_TOL: f64 = 1e-6;

impl Default for MeasureConfig {
    fn default() -> Self {
        Self {
            gamma: DEFAULT_GAMMA,
            max_outer_iters: DEFAULT_MAX_OUTER_ITERS,
            tol: DEFAULT_TOL,
            init: InitStrategy::DiagonalPath,
            metric: CostMetric::SqEuclidean,
            band: None,
        }
    }
}

impl MeasureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::Parameter(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if self.max_outer_iters < 1 {
            return Err(Error::Parameter(
                "max_outer_iters must be at least 1".into(),
            ));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Parameter(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.band == Some(0) {
            return Err(Error::Parameter("band radius must be at least 1".into()));
        }
        Ok(())
    }

    /// Full parameter record for one measure, suitable for deterministic
    /// replay via [`MeasureConfig::from_params`].
    pub fn to_params(&self, measure: Measure) -> BTreeMap<String, Value> {
        let mut p = BTreeMap::new();
        p.insert("measure".into(), json!(measure.name()));
        p.insert("band".into(), json!(self.band));
        match measure {
            Measure::Dtw | Measure::SoftDtw => {
                p.insert("metric".into(), json!(self.metric.name()));
            }
            Measure::Gdtw | Measure::SoftGdtw => {
                p.insert("self_distance_metric".into(), json!("euclidean"));
                p.insert("init".into(), json!(self.init.name()));
                p.insert("max_outer_iters".into(), json!(self.max_outer_iters));
                p.insert("tol".into(), json!(self.tol));
            }
            Measure::DtwGi | Measure::SoftDtwGi => {
                p.insert("metric".into(), json!("sq_euclidean"));
                p.insert("max_outer_iters".into(), json!(self.max_outer_iters));
                p.insert("tol".into(), json!(self.tol));
            }
            Measure::Ctw => {
                p.insert("metric".into(), json!(self.metric.name()));
                p.insert("max_outer_iters".into(), json!(self.max_outer_iters));
                p.insert("tol".into(), json!(self.tol));
                p.insert("ridge".into(), json!(crate::hetero::CCA_RIDGE));
            }
        }
        if measure.is_soft() {
            p.insert("gamma".into(), json!(self.gamma));
        }
        p
    }

    /// Rebuilds a config from an echoed parameter record (missing keys keep
    /// their defaults; informational keys are ignored).
    pub fn from_params(params: &BTreeMap<String, Value>) -> Result<Self> {
        let mut cfg = MeasureConfig::default();
        if let Some(v) = params.get("gamma") {
            cfg.gamma = v
                .as_f64()
                .ok_or_else(|| Error::Parameter("gamma must be a number".into()))?;
        }
        if let Some(v) = params.get("max_outer_iters") {
            cfg.max_outer_iters = v
                .as_u64()
                .ok_or_else(|| Error::Parameter("max_outer_iters must be a count".into()))?
                as usize;
        }
        if let Some(v) = params.get("tol") {
            cfg.tol = v
                .as_f64()
                .ok_or_else(|| Error::Parameter("tol must be a number".into()))?;
        }
        if let Some(v) = params.get("init") {
            cfg.init = match v.as_str() {
                Some("diagonal_path") => InitStrategy::DiagonalPath,
                Some("uniform") => InitStrategy::Uniform,
                _ => return Err(Error::Parameter(format!("unknown init `{v}`"))),
            };
        }
        if let Some(v) = params.get("metric") {
            cfg.metric = v
                .as_str()
                .ok_or_else(|| Error::Parameter("metric must be a string".into()))?
                .parse()?;
        }
        if let Some(v) = params.get("band") {
            cfg.band =
                match v {
                    Value::Null => None,
                    Value::Number(n) => Some(n.as_u64().ok_or_else(|| {
                        Error::Parameter("band must be a nonnegative count".into())
                    })? as usize),
                    _ => return Err(Error::Parameter("band must be a count or null".into())),
                };
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A scored trajectory pair: the scalar discrepancy plus alignment
/// artifacts and solver diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureResult {
    pub measure: Measure,
    /// Lower is more similar. Nonnegative for the hard measures; `soft_dtw`
    /// may go negative for small `gamma`.
    pub discrepancy: f64,
    pub path: AlignmentPath,
    pub iterations: usize,
    pub converged: bool,
    /// Full solver parameter record; replay with
    /// [`MeasureConfig::from_params`] reproduces `discrepancy` bit-exactly.
    pub params: BTreeMap<String, Value>,
    /// Objective value of each accepted iterate.
    pub objective_trace: Vec<f64>,
}

impl MeasureResult {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("measure result serializes")
    }
}
