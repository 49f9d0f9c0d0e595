//! Trajectory preprocessing: keypoint selection, mirroring, resampling,
//! speed profiles, and pairwise time alignment. Every operation is a pure
//! function, so a chain of steps is reproducible by construction.

mod ops;
mod schema;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::resolve;
use crate::model::Trajectory;

pub use ops::{
    align_pair, align_pair_weighted, gradient_magnitude, mirror_pair, resample, select_keypoints,
};
pub use schema::{KeypointSchema, RobotMirrorSpec};

/// One step of a preprocessing chain, as written in a manifest. Schema
/// documents are referenced by path and resolved against the manifest
/// directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", content = "params", rename_all = "snake_case")]
pub enum PreprocessStep {
    /// Keypoint reduction of the first (human) trajectory.
    SelectKeypoints { schema: PathBuf, keep: Vec<String> },
    /// Mirror both sides of the pair.
    Mirror {
        schema: PathBuf,
        robot_spec: PathBuf,
    },
    /// Resample both trajectories to a common rate.
    Resample { target_hz: f64 },
    /// Replace both trajectories by their normalized speed profiles.
    GradientMagnitude,
    /// Soft time alignment of the pair; re-times the second trajectory
    /// onto the first one's timeline.
    Align {
        gamma: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        lambda: Option<f64>,
    },
}

/// Applies a preprocessing chain to one (human, robot) pair.
pub fn apply_chain(
    steps: &[PreprocessStep],
    base_dir: &Path,
    a: Trajectory,
    b: Trajectory,
) -> Result<(Trajectory, Trajectory)> {
    let mut a = a;
    let mut b = b;
    for step in steps {
        match step {
            PreprocessStep::SelectKeypoints { schema, keep } => {
                let schema = KeypointSchema::load_json(resolve(base_dir, schema))?;
                a = select_keypoints(&a, &schema, keep)?;
            }
            PreprocessStep::Mirror { schema, robot_spec } => {
                let schema = KeypointSchema::load_json(resolve(base_dir, schema))?;
                let rspec = RobotMirrorSpec::load_json(resolve(base_dir, robot_spec))?;
                let (ma, mb) = mirror_pair(&a, &b, &schema, &rspec)?;
                a = ma;
                b = mb;
            }
            PreprocessStep::Resample { target_hz } => {
                a = resample(&a, *target_hz)?;
                b = resample(&b, *target_hz)?;
            }
            PreprocessStep::GradientMagnitude => {
                a = gradient_magnitude(&a);
                b = gradient_magnitude(&b);
            }
            PreprocessStep::Align { gamma, lambda } => {
                let (na, nb, _) = match lambda {
                    Some(l) => ops::align_pair_weighted(&a, &b, *gamma, *l)?,
                    None => ops::align_pair(&a, &b, *gamma)?,
                };
                a = na;
                b = nb;
            }
        }
    }
    Ok((a, b))
}
