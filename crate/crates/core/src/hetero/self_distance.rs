//! Intra-sequence pairwise distance structure.

use nalgebra::DMatrix;

use crate::align::CostMetric;
use crate::error::{Error, Result};
use crate::model::Trajectory;

/// Symmetric `T x T` matrix of distances between frames of one trajectory.
/// Unchanged under any isometry of the feature space, which is what makes
/// the Gromov-style measures dimension-agnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfDistanceMatrix {
    values: DMatrix<f64>,
    metric: CostMetric,
}

impl SelfDistanceMatrix {
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn metric(&self) -> CostMetric {
        self.metric
    }

    pub fn len(&self) -> usize {
        self.values.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Distance between every pair of frames of `a`. The upper triangle is
/// computed once and mirrored, so the result is symmetric bit-exactly.
pub fn self_distance(a: &Trajectory, metric: CostMetric) -> Result<SelfDistanceMatrix> {
    if metric == CostMetric::Precomputed {
        return Err(Error::Parameter(
            "self_distance needs euclidean or sq_euclidean".into(),
        ));
    }
    let frames = a.frames();
    let (t, d) = (frames.nrows(), frames.ncols());
    let mut values = DMatrix::zeros(t, t);
    for i in 0..t {
        for k in (i + 1)..t {
            let mut acc = 0.0;
            for c in 0..d {
                let diff = frames[(i, c)] - frames[(k, c)];
                acc += diff * diff;
            }
            let v = match metric {
                CostMetric::Euclidean => acc.sqrt(),
                _ => acc,
            };
            values[(i, k)] = v;
            values[(k, i)] = v;
        }
    }
    Ok(SelfDistanceMatrix { values, metric })
}
