//! Weighted orthonormal-plus-translation fit between aligned frame pairs.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// An orthonormal-column linear map plus translation, lifting a
/// `D_b`-dimensional sequence into `D_a` dimensions (`D_b <= D_a`). The
/// columns satisfy `Q^T Q = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTransform {
    matrix: DMatrix<f64>,
    offset: DVector<f64>,
}

impl FeatureTransform {
    /// Zero-padded identity columns with the offset that maps `y_mean` onto
    /// `x_mean`; the deterministic starting point of the alternating fits.
    pub fn identity_lift(
        d_a: usize,
        d_b: usize,
        x_mean: &DVector<f64>,
        y_mean: &DVector<f64>,
    ) -> Self {
        let mut q = DMatrix::zeros(d_a, d_b);
        for k in 0..d_b {
            q[(k, k)] = 1.0;
        }
        let offset = x_mean - &q * y_mean;
        Self { matrix: q, offset }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn offset(&self) -> &DVector<f64> {
        &self.offset
    }

    /// Applies `y -> Q y + c` to every row of a `T x D_b` frame matrix.
    pub fn apply(&self, frames: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = frames * self.matrix.transpose();
        for i in 0..out.nrows() {
            for j in 0..out.ncols() {
                out[(i, j)] += self.offset[j];
            }
        }
        out
    }

    /// Largest deviation of `Q^T Q` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.matrix.transpose() * &self.matrix;
        let d = gram.ncols();
        (gram - DMatrix::identity(d, d)).abs().max()
    }

    /// Frobenius distance between the `[Q | c]` blocks of two transforms.
    pub fn frobenius_distance(&self, other: &FeatureTransform) -> f64 {
        let dq = (&self.matrix - &other.matrix).norm();
        let dc = (&self.offset - &other.offset).norm();
        (dq * dq + dc * dc).sqrt()
    }
}

/// Fits the transform minimizing `sum w * |x - (Q y + c)|^2` over weighted
/// aligned pairs `(i, j, w)` indexing rows of `x_frames` and `y_frames`.
///
/// The offset comes from the weighted means; `Q = U V^T` from the thin
/// singular value decomposition of the weighted cross-covariance. A
/// cross-covariance with numerical rank below `D_b` does not determine the
/// fit and raises a degenerate-geometry error naming the deficient rank.
pub fn fit_transform(
    x_frames: &DMatrix<f64>,
    y_frames: &DMatrix<f64>,
    weighted_pairs: &[(usize, usize, f64)],
) -> Result<FeatureTransform> {
    let (d_a, d_b) = (x_frames.ncols(), y_frames.ncols());
    if d_b > d_a {
        return Err(Error::Shape(format!(
            "fit_transform lifts the lower-dimensional side: D_b={d_b} > D_a={d_a}"
        )));
    }
    let active: Vec<&(usize, usize, f64)> = weighted_pairs
        .iter()
        .filter(|&&(_, _, w)| w > 0.0)
        .collect();
    let total_w: f64 = active.iter().map(|&&(_, _, w)| w).sum();
    if active.len() < d_b || total_w <= 0.0 {
        return Err(Error::Parameter(format!(
            "fit_transform needs at least {d_b} positively weighted pairs, got {}",
            active.len()
        )));
    }

    let mut x_mean = DVector::<f64>::zeros(d_a);
    let mut y_mean = DVector::<f64>::zeros(d_b);
    for &&(i, j, w) in &active {
        for k in 0..d_a {
            x_mean[k] += w * x_frames[(i, k)];
        }
        for k in 0..d_b {
            y_mean[k] += w * y_frames[(j, k)];
        }
    }
    x_mean /= total_w;
    y_mean /= total_w;

    // Weighted cross-covariance of centered pairs, D_a x D_b.
    let mut cross = DMatrix::<f64>::zeros(d_a, d_b);
    for &&(i, j, w) in &active {
        for r in 0..d_a {
            let xc = x_frames[(i, r)] - x_mean[r];
            for c in 0..d_b {
                cross[(r, c)] += w * xc * (y_frames[(j, c)] - y_mean[c]);
            }
        }
    }

    let svd = cross.svd(true, true);
    let s = &svd.singular_values;
    let s_max = s.iter().cloned().fold(0.0f64, f64::max);
    let tol = s_max * (d_a.max(d_b) as f64) * f64::EPSILON * 64.0;
    let rank = s.iter().filter(|&&v| v > tol).count();
    if rank < d_b {
        return Err(Error::DegenerateGeometry(format!(
            "cross-covariance rank {rank} < {d_b}; aligned pairs do not span the fit"
        )));
    }

    let u = svd.u.expect("svd with u");
    let v_t = svd.v_t.expect("svd with v_t");
    let q = u.columns(0, d_b) * v_t;
    let offset = &x_mean - &q * &y_mean;
    Ok(FeatureTransform { matrix: q, offset })
}
