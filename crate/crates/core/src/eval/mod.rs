//! Batch evaluation harness: scoring runs, score normalization, rank
//! agreement against survey data, and the synthetic degradation study.

mod batch;
mod rank;
mod report;
pub(crate) mod rng;
mod study;
pub mod svg;
mod synth;

pub use batch::{run_batch, BatchOptions};
pub use rank::{kendall_tau_b, rank_agreement, spearman_rho, RankAgreement};
pub use report::{GroupRecord, NormalizationMode, PairRecord, ScoreReport, REPORT_SCHEMA_VERSION};
pub use study::{
    degradation_study, MeasureStudy, StudyConfig, StudyGroup, StudyLevel, StudySummary,
    STUDY_SCHEMA_VERSION,
};
pub use synth::{
    generate_pair, BaseFamily, GroundTruth, SynthSpec, TransformKind, WarpKind,
    SYNTH_SAMPLE_RATE_HZ,
};
