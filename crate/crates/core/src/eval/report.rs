//! Batch score reports: per-pair rows, per-group aggregates, and score
//! normalization.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Measure;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationMode {
    Raw,
    MinmaxPerMeasure,
}

/// One (pair, measure) outcome. A failed solve keeps its row with an
/// error note instead of aborting the batch.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairRecord {
    pub pair_id: String,
    pub group_label: String,
    pub measure: Measure,
    pub discrepancy: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Zero unless timing capture was requested; timings are excluded from
    /// the reproducibility contract.
    pub wall_time_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupRecord {
    pub group_label: String,
    pub measure: Measure,
    pub mean_discrepancy: f64,
    pub std_discrepancy: f64,
    pub n: usize,
}

/// The batch scoring report. Rows are sorted by (pair id, measure) and
/// groups by (label, measure), so serialization does not depend on
/// evaluation order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScoreReport {
    pub schema_version: u32,
    pub normalization: NormalizationMode,
    pub per_pair: Vec<PairRecord>,
    pub per_group: Vec<GroupRecord>,
}

impl ScoreReport {
    /// Sorts rows and computes per-group statistics over the successful
    /// ones.
    pub fn from_rows(mut per_pair: Vec<PairRecord>) -> Self {
        per_pair
            .sort_by(|a, b| (a.pair_id.as_str(), a.measure).cmp(&(b.pair_id.as_str(), b.measure)));
        let per_group = aggregate(&per_pair);
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            normalization: NormalizationMode::Raw,
            per_pair,
            per_group,
        }
    }

    /// Group labels in per-group order (deduplicated).
    pub fn group_labels(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for g in &self.per_group {
            if !out.contains(&g.group_label) {
                out.push(g.group_label.clone());
            }
        }
        out
    }

    pub fn measures(&self) -> Vec<Measure> {
        let mut out = Vec::new();
        for g in &self.per_group {
            if !out.contains(&g.measure) {
                out.push(g.measure);
            }
        }
        out
    }

    pub fn group_mean(&self, label: &str, measure: Measure) -> Option<f64> {
        self.per_group
            .iter()
            .find(|g| g.group_label == label && g.measure == measure)
            .map(|g| g.mean_discrepancy)
    }

    /// Min-max normalization of the group means of each measure onto
    /// `[0, 1]` (stds rescaled by the same factor); `Raw` is the identity.
    /// Group ordering within a measure is preserved exactly.
    pub fn normalized(&self, mode: NormalizationMode) -> Result<ScoreReport> {
        match mode {
            NormalizationMode::Raw => Ok(self.clone()),
            NormalizationMode::MinmaxPerMeasure => {
                if self.group_labels().len() < 2 {
                    return Err(Error::Parameter(
                        "minmax normalization needs at least 2 groups".into(),
                    ));
                }
                let mut out = self.clone();
                out.normalization = NormalizationMode::MinmaxPerMeasure;
                for measure in self.measures() {
                    let means: Vec<f64> = self
                        .per_group
                        .iter()
                        .filter(|g| g.measure == measure)
                        .map(|g| g.mean_discrepancy)
                        .collect();
                    let lo = means.iter().cloned().fold(f64::INFINITY, f64::min);
                    let hi = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    if hi == lo {
                        return Err(Error::DegenerateScale(format!(
                            "all group means equal for {measure}; nothing to normalize"
                        )));
                    }
                    let span = hi - lo;
                    for g in out.per_group.iter_mut().filter(|g| g.measure == measure) {
                        g.mean_discrepancy = (g.mean_discrepancy - lo) / span;
                        g.std_discrepancy /= span;
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json_string()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Parses a report and re-checks that the stored group statistics match
    /// the rows (raw reports only; normalized group means are rescaled by
    /// design).
    pub fn from_json_str(text: &str) -> Result<Self> {
        let report: ScoreReport =
            serde_json::from_str(text).map_err(|e| Error::Manifest(format!("bad report: {e}")))?;
        if report.normalization == NormalizationMode::Raw {
            let recomputed = aggregate(&report.per_pair);
            if recomputed.len() != report.per_group.len() {
                return Err(Error::Manifest(
                    "per_group does not match per_pair rows".into(),
                ));
            }
            for (a, b) in recomputed.iter().zip(&report.per_group) {
                let close = (a.mean_discrepancy - b.mean_discrepancy).abs() <= 1e-12
                    && (a.std_discrepancy - b.std_discrepancy).abs() <= 1e-12
                    && a.n == b.n
                    && a.group_label == b.group_label
                    && a.measure == b.measure;
                if !close {
                    return Err(Error::Manifest(format!(
                        "per_group statistics for ({}, {}) are not recomputable from per_pair",
                        b.group_label, b.measure
                    )));
                }
            }
        }
        Ok(report)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json_str(&text)
    }
}

fn aggregate(per_pair: &[PairRecord]) -> Vec<GroupRecord> {
    let mut keys: Vec<(String, Measure)> = Vec::new();
    for row in per_pair {
        let key = (row.group_label.clone(), row.measure);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.sort();
    keys.iter()
        .filter_map(|(label, measure)| {
            let values: Vec<f64> = per_pair
                .iter()
                .filter(|r| &r.group_label == label && r.measure == *measure)
                .filter_map(|r| r.discrepancy)
                .collect();
            if values.is_empty() {
                return None;
            }
            let n = values.len();
            let mean = values.iter().sum::<f64>() / n as f64;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
            Some(GroupRecord {
                group_label: label.clone(),
                measure: *measure,
                mean_discrepancy: mean,
                std_discrepancy: var.sqrt(),
                n,
            })
        })
        .collect()
}
