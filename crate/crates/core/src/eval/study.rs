//! Synthetic degradation study: does a measure's group ordering track a
//! known corruption ordering?

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::rank::kendall_tau_b;
use crate::eval::report::{NormalizationMode, PairRecord, ScoreReport};
use crate::eval::svg::{bar_chart, BarSeries};
use crate::eval::synth::{generate_pair, BaseFamily, SynthSpec, TransformKind, WarpKind};
use crate::model::{Measure, MeasureConfig};
use crate::score::score_pair;

pub const STUDY_SCHEMA_VERSION: u32 = 1;

/// One degradation level: a label plus the pair recipes scored under it.
/// Level order is the ground-truth degradation order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StudyLevel {
    pub label: String,
    pub noise_sigma: f64,
    pub specs: Vec<SynthSpec>,
}

/// One corruption level of the default study.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LevelSpec {
    pub transform: TransformKind,
    pub warp: WarpKind,
    pub noise_sigma: f64,
}

/// Declarative study configuration; `levels()` expands it into concrete
/// pair recipes sharing seeds across levels so only the corruption varies.
///
/// The default sweep mirrors a degrading model family: level 0 is a clean
/// isometric rendition of the source motion; higher levels pass it through
/// a nonlinear framewise map, jitter the timing, and add growing noise.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct StudyConfig {
    pub base: BaseFamily,
    pub d_a: usize,
    pub d_b: usize,
    pub t: usize,
    pub levels: Vec<LevelSpec>,
    pub pairs_per_level: usize,
    pub base_seed: u64,
    pub measures: Vec<Measure>,
    pub config: MeasureConfig,
}

impl Default for StudyConfig {
    fn default() -> Self {
        let nonlinear = |sigma| LevelSpec {
            transform: TransformKind::NonlinearMlpLike,
            warp: WarpKind::RandomMonotone,
            noise_sigma: sigma,
        };
        Self {
            base: BaseFamily::SinusoidMix,
            d_a: 6,
            d_b: 3,
            t: 40,
            levels: vec![
                LevelSpec {
                    transform: TransformKind::Rotation,
                    warp: WarpKind::None,
                    noise_sigma: 0.0,
                },
                nonlinear(0.15),
                nonlinear(0.45),
                nonlinear(1.0),
            ],
            pairs_per_level: 5,
            base_seed: 7,
            measures: vec![
                Measure::Gdtw,
                Measure::SoftGdtw,
                Measure::DtwGi,
                Measure::SoftDtwGi,
                Measure::Ctw,
            ],
            config: MeasureConfig::default(),
        }
    }
}

impl StudyConfig {
    pub fn levels(&self) -> Vec<StudyLevel> {
        self.levels
            .iter()
            .enumerate()
            .map(|(li, level)| StudyLevel {
                label: format!("level_{li}"),
                noise_sigma: level.noise_sigma,
                specs: (0..self.pairs_per_level)
                    .map(|p| SynthSpec {
                        base: self.base,
                        d_a: self.d_a,
                        d_b: self.d_b,
                        t: self.t,
                        transform: level.transform,
                        warp: level.warp,
                        noise_sigma: level.noise_sigma,
                        seed: self.base_seed + p as u64,
                    })
                    .collect(),
            })
            .collect()
    }

    pub fn run(&self) -> Result<StudySummary> {
        degradation_study(&self.levels(), &self.measures, &self.config)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureStudy {
    pub measure: Measure,
    /// Kendall tau between the level order and the group-mean order.
    pub kendall_tau: f64,
    pub group_means: Vec<f64>,
    pub group_stds: Vec<f64>,
    /// Group means min-max normalized within the measure.
    pub normalized_means: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StudyGroup {
    pub label: String,
    pub noise_sigma: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StudySummary {
    pub schema_version: u32,
    pub groups: Vec<StudyGroup>,
    pub per_measure: Vec<MeasureStudy>,
}

impl StudySummary {
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }

    /// Fig-4-style grouped bar chart of the normalized means.
    pub fn to_svg(&self) -> String {
        let groups: Vec<String> = self
            .groups
            .iter()
            .map(|g| format!("{} (s={})", g.label, g.noise_sigma))
            .collect();
        let series: Vec<BarSeries> = self
            .per_measure
            .iter()
            .map(|m| BarSeries {
                name: m.measure.to_string(),
                means: m.normalized_means.clone(),
                stds: m.group_stds.clone(),
            })
            .collect();
        bar_chart(
            "Synthetic degradation study",
            "normalized mean discrepancy",
            &groups,
            &series,
        )
    }
}

/// Scores every level's pairs under every measure and reports, per
/// measure, the Kendall tau between the known degradation order and the
/// group-mean ordering. Group means are also min-max normalized within
/// each measure (so a measure that cannot spread the levels at all is a
/// degenerate-scale error).
pub fn degradation_study(
    levels: &[StudyLevel],
    measures: &[Measure],
    cfg: &MeasureConfig,
) -> Result<StudySummary> {
    if levels.len() < 3 {
        return Err(Error::Parameter(
            "degradation study needs at least 3 levels".into(),
        ));
    }
    if levels.iter().any(|l| l.specs.len() < 3) {
        return Err(Error::Parameter(
            "degradation study needs at least 3 pairs per level".into(),
        ));
    }
    if measures.is_empty() {
        return Err(Error::Parameter(
            "degradation study needs at least one measure".into(),
        ));
    }

    let mut rows = Vec::new();
    for level in levels {
        for (k, spec) in level.specs.iter().enumerate() {
            let (a, b, _) = generate_pair(spec)?;
            for &measure in measures {
                let record = match score_pair(&a, &b, measure, cfg) {
                    Ok(result) => PairRecord {
                        pair_id: format!("{}_pair{k}", level.label),
                        group_label: level.label.clone(),
                        measure,
                        discrepancy: Some(result.discrepancy),
                        converged: result.converged,
                        iterations: result.iterations,
                        wall_time_ms: 0.0,
                        error: None,
                    },
                    Err(e) => PairRecord {
                        pair_id: format!("{}_pair{k}", level.label),
                        group_label: level.label.clone(),
                        measure,
                        discrepancy: None,
                        converged: false,
                        iterations: 0,
                        wall_time_ms: 0.0,
                        error: Some(e.to_string()),
                    },
                };
                rows.push(record);
            }
        }
    }
    let report = ScoreReport::from_rows(rows);
    let normalized = report.normalized(NormalizationMode::MinmaxPerMeasure)?;

    let level_order: Vec<f64> = (0..levels.len()).map(|i| i as f64).collect();
    let mut per_measure = Vec::new();
    for &measure in measures {
        let mut means = Vec::new();
        let mut stds = Vec::new();
        let mut normalized_means = Vec::new();
        for level in levels {
            let group = report
                .per_group
                .iter()
                .find(|g| g.group_label == level.label && g.measure == measure)
                .ok_or_else(|| {
                    Error::DegenerateScale(format!(
                        "no successful {measure} scores for {}",
                        level.label
                    ))
                })?;
            means.push(group.mean_discrepancy);
            stds.push(group.std_discrepancy);
            normalized_means.push(
                normalized
                    .group_mean(&level.label, measure)
                    .expect("normalized report keeps groups"),
            );
        }
        per_measure.push(MeasureStudy {
            measure,
            kendall_tau: kendall_tau_b(&level_order, &means),
            group_means: means,
            group_stds: stds,
            normalized_means,
        });
    }

    Ok(StudySummary {
        schema_version: STUDY_SCHEMA_VERSION,
        groups: levels
            .iter()
            .map(|l| StudyGroup {
                label: l.label.clone(),
                noise_sigma: l.noise_sigma,
            })
            .collect(),
        per_measure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_measure_config() -> StudyConfig {
        StudyConfig {
            measures: vec![Measure::Gdtw, Measure::Ctw],
            ..StudyConfig::default()
        }
    }

    #[test]
    fn gdtw_tracks_the_degradation_sweep_perfectly() {
        let summary = two_measure_config().run().unwrap();
        let gdtw = summary
            .per_measure
            .iter()
            .find(|m| m.measure == Measure::Gdtw)
            .unwrap();
        assert_eq!(gdtw.kendall_tau, 1.0, "means: {:?}", gdtw.group_means);
        let ctw = summary
            .per_measure
            .iter()
            .find(|m| m.measure == Measure::Ctw)
            .unwrap();
        assert!(gdtw.kendall_tau >= ctw.kendall_tau);
    }

    #[test]
    fn gdtw_separates_corruption_levels_more_sharply_than_ctw() {
        // Relative spread between the mildest and harshest nonlinear
        // levels; a measure that "fails to differentiate" has a spread
        // near 1.
        let summary = two_measure_config().run().unwrap();
        let spread = |measure: Measure| {
            let m = summary
                .per_measure
                .iter()
                .find(|m| m.measure == measure)
                .unwrap();
            m.group_means[3] / m.group_means[1]
        };
        let gdtw_spread = spread(Measure::Gdtw);
        let ctw_spread = spread(Measure::Ctw);
        assert!(
            gdtw_spread > ctw_spread,
            "gdtw spread {gdtw_spread:.3} vs ctw spread {ctw_spread:.3}"
        );
    }

    #[test]
    fn duplicated_single_level_is_a_degenerate_scale() {
        let cfg = two_measure_config();
        let mut levels = cfg.levels();
        let level = levels.remove(1);
        let duplicated: Vec<StudyLevel> = (0..3)
            .map(|k| StudyLevel {
                label: format!("dup_{k}"),
                noise_sigma: level.noise_sigma,
                specs: level.specs.clone(),
            })
            .collect();
        let err = degradation_study(&duplicated, &[Measure::Gdtw], &MeasureConfig::default())
            .unwrap_err();
        assert!(matches!(err, Error::DegenerateScale(_)), "{err}");
    }

    #[test]
    fn summary_svg_is_well_formed() {
        let summary = two_measure_config().run().unwrap();
        let svg = summary.to_svg();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("gdtw"));
    }
}
