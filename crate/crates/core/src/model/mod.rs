//! Core data types: trajectories, alignment paths, measure results, batch
//! manifests, and survey tables, plus their file formats.

mod manifest;
mod measure;
mod path;
mod survey;
mod trajectory;

pub use manifest::{resolve, MeasureSpec, MotionPairManifest, PairEntry, ParamOverrides};
pub use measure::{
    InitStrategy, Measure, MeasureConfig, MeasureResult, DEFAULT_GAMMA, DEFAULT_MAX_OUTER_ITERS,
    DEFAULT_TOL,
};
pub use path::{validate_path, AlignmentPath, PathMode};
pub use survey::{SurveyRow, SurveyTable};
pub use trajectory::{Trajectory, MAX_DELTA_T_CV};
