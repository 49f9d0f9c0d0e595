//! Similarity scoring for heterogeneous motion trajectories.
//!
//! Compares multivariate time series that need not share a feature
//! dimension (e.g. human keypoint sequences against robot joint
//! sequences) with a family of warping-based measures:
//!
//! * `dtw`, `soft_dtw`: classic and smoothed dynamic time warping
//!   (matching dimensions required);
//! * `gdtw`, `soft_gdtw`: Gromov DTW over intra-sequence distance
//!   structure, invariant to isometries and dimension-agnostic;
//! * `dtw_gi`, `soft_dtw_gi`: joint optimization of a temporal alignment
//!   and an orthonormal feature-space transform;
//! * `ctw`: canonical time warping (alternating DTW and CCA), the
//!   rotation-sensitive baseline.
//!
//! On top of the measures sit a preprocessing pipeline (keypoint
//! selection, mirroring, resampling, gradient-magnitude time alignment),
//! a batch scoring harness with JSON reports, rank agreement against
//! survey tables, and a seeded synthetic pair generator for validation.
//! The `motionsim` binary exposes all of it on the command line.

pub mod align;
pub mod error;
pub mod eval;
pub mod hetero;
pub mod model;
pub mod preprocess;
pub mod score;

pub use error::{Error, Result};
pub use model::{
    validate_path, AlignmentPath, InitStrategy, Measure, MeasureConfig, MeasureResult,
    MotionPairManifest, PathMode, SurveyTable, Trajectory,
};
pub use score::score_pair;
