//! Keypoint layout descriptions for pose-style trajectories.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Describes how keypoints are flattened into a feature vector: `K`
/// keypoints of `dims_per_keypoint` coordinates each, in name order.
/// `mirror_pairs` are (left, right) keypoint indices swapped under a
/// horizontal reflection; `mirror_axis` is the coordinate index within
/// each keypoint whose sign flips.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KeypointSchema {
    pub keypoint_names: Vec<String>,
    pub dims_per_keypoint: usize,
    #[serde(default)]
    pub mirror_pairs: Vec<(usize, usize)>,
    #[serde(default)]
    pub mirror_axis: usize,
}

impl KeypointSchema {
    pub fn validate(&self) -> Result<()> {
        if !(self.dims_per_keypoint == 2 || self.dims_per_keypoint == 3) {
            return Err(Error::Schema(format!(
                "dims_per_keypoint must be 2 or 3, got {}",
                self.dims_per_keypoint
            )));
        }
        if self.mirror_axis >= self.dims_per_keypoint {
            return Err(Error::Schema(format!(
                "mirror_axis {} out of range for {} dims per keypoint",
                self.mirror_axis, self.dims_per_keypoint
            )));
        }
        let k = self.keypoint_names.len();
        let mut seen = BTreeSet::new();
        for &(l, r) in &self.mirror_pairs {
            if l >= k || r >= k {
                return Err(Error::Schema(format!(
                    "mirror pair ({l}, {r}) out of range"
                )));
            }
            if l == r || !seen.insert(l) || !seen.insert(r) {
                return Err(Error::Schema(format!(
                    "mirror pairs are not disjoint at ({l}, {r})"
                )));
            }
        }
        Ok(())
    }

    pub fn load_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let schema: Self = serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
        schema.validate()?;
        Ok(schema)
    }

    /// Total feature dimension `K * dims_per_keypoint`.
    pub fn feature_dim(&self) -> usize {
        self.keypoint_names.len() * self.dims_per_keypoint
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.keypoint_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Schema(format!("unknown keypoint `{name}`")))
    }

    /// The 33-landmark pose layout with left/right mirror pairs, plus the
    /// default upper-body keep list (shoulders, elbows, wrists, thumbs as a
    /// palm surrogate, index fingers).
    pub fn pose_33(dims_per_keypoint: usize) -> Self {
        let names = [
            "nose",
            "left_eye_inner",
            "left_eye",
            "left_eye_outer",
            "right_eye_inner",
            "right_eye",
            "right_eye_outer",
            "left_ear",
            "right_ear",
            "mouth_left",
            "mouth_right",
            "left_shoulder",
            "right_shoulder",
            "left_elbow",
            "right_elbow",
            "left_wrist",
            "right_wrist",
            "left_pinky",
            "right_pinky",
            "left_index",
            "right_index",
            "left_thumb",
            "right_thumb",
            "left_hip",
            "right_hip",
            "left_knee",
            "right_knee",
            "left_ankle",
            "right_ankle",
            "left_heel",
            "right_heel",
            "left_foot_index",
            "right_foot_index",
        ];
        let mirror_pairs = vec![
            (1, 4),
            (2, 5),
            (3, 6),
            (7, 8),
            (9, 10),
            (11, 12),
            (13, 14),
            (15, 16),
            (17, 18),
            (19, 20),
            (21, 22),
            (23, 24),
            (25, 26),
            (27, 28),
            (29, 30),
            (31, 32),
        ];
        Self {
            keypoint_names: names.iter().map(|s| s.to_string()).collect(),
            dims_per_keypoint,
            mirror_pairs,
            mirror_axis: 0,
        }
    }

    /// Default upper-body keep list for [`KeypointSchema::pose_33`].
    pub fn upper_body_keep() -> Vec<String> {
        [
            "left_shoulder",
            "right_shoulder",
            "left_elbow",
            "right_elbow",
            "left_wrist",
            "right_wrist",
            "left_thumb",
            "right_thumb",
            "left_index",
            "right_index",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect()
    }
}

/// Robot-side mirror description: the joint channels whose sign flips
/// under a horizontal reflection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RobotMirrorSpec {
    pub negate_channels: Vec<usize>,
}

impl RobotMirrorSpec {
    pub fn validate(&self, dim: usize) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &c in &self.negate_channels {
            if c >= dim {
                return Err(Error::Schema(format!(
                    "negate channel {c} out of range for dimension {dim}"
                )));
            }
            if !seen.insert(c) {
                return Err(Error::Schema(format!("negate channel {c} listed twice")));
            }
        }
        Ok(())
    }

    pub fn load_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))
    }
}
