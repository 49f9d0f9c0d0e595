//! Pairwise frame-to-frame cost matrices.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostMetric {
    SqEuclidean,
    Euclidean,
    Precomputed,
}

impl CostMetric {
    pub fn name(&self) -> &'static str {
        match self {
            CostMetric::SqEuclidean => "sq_euclidean",
            CostMetric::Euclidean => "euclidean",
            CostMetric::Precomputed => "precomputed",
        }
    }
}

impl std::str::FromStr for CostMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sq_euclidean" => Ok(CostMetric::SqEuclidean),
            "euclidean" => Ok(CostMetric::Euclidean),
            "precomputed" => Ok(CostMetric::Precomputed),
            other => Err(Error::Parameter(format!(
                "unknown metric `{other}`; valid metrics: sq_euclidean, euclidean, precomputed"
            ))),
        }
    }
}

/// A `T_a x T_b` matrix of nonnegative frame-to-frame costs.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    values: DMatrix<f64>,
    metric: CostMetric,
}

impl CostMatrix {
    /// Wraps an externally computed cost matrix, validating entries.
    pub fn precomputed(values: DMatrix<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Shape("cost matrix must be non-empty".into()));
        }
        if values.iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::Shape(
                "cost matrix entries must be finite and nonnegative".into(),
            ));
        }
        Ok(Self {
            values,
            metric: CostMetric::Precomputed,
        })
    }

    pub(crate) fn from_parts(values: DMatrix<f64>, metric: CostMetric) -> Self {
        Self { values, metric }
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn metric(&self) -> CostMetric {
        self.metric
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.values.nrows(), self.values.ncols())
    }
}

/// Computes the cost matrix between two same-dimension trajectories.
pub fn pairwise_cost(a: &Trajectory, b: &Trajectory, metric: CostMetric) -> Result<CostMatrix> {
    if metric == CostMetric::Precomputed {
        return Err(Error::Parameter(
            "precomputed costs come from CostMatrix::precomputed, not pairwise_cost".into(),
        ));
    }
    if a.dim() != b.dim() {
        return Err(Error::Shape(format!(
            "pairwise cost needs matching dimensions, got {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(CostMatrix::from_parts(
        pairwise_cost_frames(a.frames(), b.frames(), metric),
        metric,
    ))
}

/// Same as [`pairwise_cost`] on raw frame matrices (used by solvers on
/// transformed or projected frames).
pub(crate) fn pairwise_cost_frames(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    metric: CostMetric,
) -> DMatrix<f64> {
    let (ta, tb, d) = (a.nrows(), b.nrows(), a.ncols());
    DMatrix::from_fn(ta, tb, |i, j| {
        let mut acc = 0.0;
        for k in 0..d {
            let diff = a[(i, k)] - b[(j, k)];
            acc += diff * diff;
        }
        match metric {
            CostMetric::Euclidean => acc.sqrt(),
            _ => acc,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sq_euclidean_by_hand() {
        let a = Trajectory::from_rows("a", 10.0, &[vec![0.0], vec![1.0]]).unwrap();
        let b = Trajectory::from_rows("b", 10.0, &[vec![0.0], vec![2.0]]).unwrap();
        let c = pairwise_cost(&a, &b, CostMetric::SqEuclidean).unwrap();
        assert_eq!(
            c.values().as_slice(),
            DMatrix::from_row_slice(2, 2, &[0.0, 4.0, 1.0, 1.0]).as_slice()
        );
    }

    #[test]
    fn identical_inputs_have_zero_diagonal() {
        let a = Trajectory::from_rows(
            "a",
            10.0,
            &[vec![0.5, 1.0], vec![2.0, -1.0], vec![0.1, 0.1]],
        )
        .unwrap();
        for metric in [CostMetric::SqEuclidean, CostMetric::Euclidean] {
            let c = pairwise_cost(&a, &a, metric).unwrap();
            for i in 0..3 {
                assert_eq!(c.values()[(i, i)], 0.0);
            }
        }
    }

    #[test]
    fn euclidean_single_pair() {
        let a = Trajectory::from_rows("a", 10.0, &[vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let b = Trajectory::from_rows("b", 10.0, &[vec![0.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let c = pairwise_cost(&a, &b, CostMetric::Euclidean).unwrap();
        assert!((c.values()[(0, 0)] - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_shape_error() {
        let a = Trajectory::from_rows("a", 10.0, &[vec![0.0], vec![1.0]]).unwrap();
        let b = Trajectory::from_rows("b", 10.0, &[vec![0.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert!(matches!(
            pairwise_cost(&a, &b, CostMetric::SqEuclidean),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn precomputed_rejects_negative_entries() {
        let m = DMatrix::from_row_slice(1, 2, &[0.0, -1.0]);
        assert!(CostMatrix::precomputed(m).is_err());
    }
}
