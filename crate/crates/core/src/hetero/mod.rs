//! Similarity measures for trajectories of different dimensionality:
//! Gromov DTW, DTW with global invariances, and the canonical time warping
//! baseline, together with their soft variants.

mod ctw;
mod dtw_gi;
mod gdtw;
mod self_distance;
mod transform;

pub use ctw::{ctw, CtwOutcome, CCA_RIDGE};
pub use dtw_gi::{dtw_gi, soft_dtw_gi, GiOutcome};
pub use gdtw::{gdtw, soft_gdtw};
pub use self_distance::{self_distance, SelfDistanceMatrix};
pub use transform::{fit_transform, FeatureTransform};
