//! Homogeneous-dimension alignment kernels shared by every measure.
//!
//! All operations here are pure functions of their inputs; scratch tables
//! are per-call, so concurrent use needs no coordination.

mod cost;
mod dtw;
mod soft;

pub(crate) use cost::pairwise_cost_frames;
pub use cost::{pairwise_cost, CostMatrix, CostMetric};
pub use dtw::{dtw, dtw_banded, DtwOutcome};
pub use soft::{
    hard_path_from_soft, soft_alignment, soft_alignment_banded, soft_dtw, soft_dtw_banded,
    SoftAlignment,
};
