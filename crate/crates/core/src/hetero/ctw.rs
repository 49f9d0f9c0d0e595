//! Canonical time warping: alternating DTW and canonical correlation
//! analysis until the alignment stabilizes.
//!
//! Sequences of different dimensions are projected into a shared
//! `d = min(D_a, D_b)` space by CCA loadings refit on the aligned pairs of
//! each iteration. Both covariance blocks carry a ridge term because the
//! aligned sample is short; projected sequences are scale-normalized to
//! unit total variance before costing so the discrepancy does not depend
//! on the arbitrary scale of the canonical directions.

use nalgebra::{DMatrix, DVector};

use crate::align::{dtw_banded, pairwise_cost_frames, CostMatrix};
use crate::error::{Error, Result};
use crate::model::{AlignmentPath, Measure, MeasureConfig, MeasureResult, Trajectory};

/// Ridge added to both covariance blocks of the CCA fit.
pub const CCA_RIDGE: f64 = 1e-6;

/// A scored result plus the final projected sequences.
#[derive(Debug, Clone)]
pub struct CtwOutcome {
    pub result: MeasureResult,
    pub projected_a: DMatrix<f64>,
    pub projected_b: DMatrix<f64>,
}

/// Column-standardizes frames; errors on a zero-variance channel.
fn standardize(frames: &DMatrix<f64>, side: &str) -> Result<DMatrix<f64>> {
    let (t, d) = (frames.nrows(), frames.ncols());
    let mut out = frames.clone();
    for j in 0..d {
        let mean = frames.column(j).sum() / t as f64;
        let var = frames
            .column(j)
            .iter()
            .map(|v| (v - mean).powi(2))
            .sum::<f64>()
            / t as f64;
        let std = var.sqrt();
        if std <= 1e-12 * (mean.abs() + 1.0) {
            return Err(Error::DegenerateGeometry(format!(
                "zero-variance channel {j} in {side}"
            )));
        }
        for i in 0..t {
            out[(i, j)] = (frames[(i, j)] - mean) / std;
        }
    }
    Ok(out)
}

/// Centers columns and rescales to unit total variance. No-op on an
/// (almost) constant matrix so identical inputs keep an exactly zero cost.
fn normalize_total_variance(mut m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.nrows() as f64;
    for j in 0..m.ncols() {
        let mean = m.column(j).sum() / t;
        for i in 0..m.nrows() {
            m[(i, j)] -= mean;
        }
    }
    let total = m.iter().map(|v| v * v).sum::<f64>() / t;
    let s = total.sqrt();
    if s > 1e-300 {
        m /= s;
    }
    m
}

/// Inverse square root of a symmetric positive-definite matrix.
fn inv_sqrt_spd(m: &DMatrix<f64>, floor: f64) -> DMatrix<f64> {
    let eig = m.clone().symmetric_eigen();
    let inv_sqrt = DVector::from_fn(eig.eigenvalues.len(), |k, _| {
        1.0 / eig.eigenvalues[k].max(floor).sqrt()
    });
    &eig.eigenvectors * DMatrix::from_diagonal(&inv_sqrt) * eig.eigenvectors.transpose()
}

/// Ridge-regularized CCA on aligned frame pairs. Returns the `D_a x d` and
/// `D_b x d` loadings plus the pair means used for centering.
fn cca_fit(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    pairs: &[(usize, usize)],
    d: usize,
) -> (DMatrix<f64>, DMatrix<f64>, DVector<f64>, DVector<f64>) {
    let n = pairs.len() as f64;
    let (da, db) = (a.ncols(), b.ncols());
    let mut x_mean = DVector::zeros(da);
    let mut y_mean = DVector::zeros(db);
    for &(i, j) in pairs {
        for k in 0..da {
            x_mean[k] += a[(i, k)];
        }
        for k in 0..db {
            y_mean[k] += b[(j, k)];
        }
    }
    x_mean /= n;
    y_mean /= n;

    let mut cxx = DMatrix::zeros(da, da);
    let mut cyy = DMatrix::zeros(db, db);
    let mut cxy = DMatrix::zeros(da, db);
    for &(i, j) in pairs {
        let xc = DVector::from_fn(da, |k, _| a[(i, k)] - x_mean[k]);
        let yc = DVector::from_fn(db, |k, _| b[(j, k)] - y_mean[k]);
        cxx += &xc * xc.transpose();
        cyy += &yc * yc.transpose();
        cxy += &xc * yc.transpose();
    }
    cxx /= n;
    cyy /= n;
    cxy /= n;
    for k in 0..da {
        cxx[(k, k)] += CCA_RIDGE;
    }
    for k in 0..db {
        cyy[(k, k)] += CCA_RIDGE;
    }

    let sx = inv_sqrt_spd(&cxx, CCA_RIDGE * 1e-3);
    let sy = inv_sqrt_spd(&cyy, CCA_RIDGE * 1e-3);
    let k_mat = &sx * cxy * &sy;
    let svd = k_mat.svd(true, true);
    let u = svd.u.expect("svd with u");
    let v_t = svd.v_t.expect("svd with v_t");
    let va = &sx * u.columns(0, d);
    let vb = &sy * v_t.rows(0, d).transpose();
    (va, vb, x_mean, y_mean)
}

fn project(frames: &DMatrix<f64>, loadings: &DMatrix<f64>, mean: &DVector<f64>) -> DMatrix<f64> {
    let mut centered = frames.clone();
    for i in 0..centered.nrows() {
        for j in 0..centered.ncols() {
            centered[(i, j)] -= mean[j];
        }
    }
    normalize_total_variance(centered * loadings)
}

/// Canonical time warping between trajectories of possibly different
/// dimensions. The discrepancy is the final DTW cost in the shared
/// projected space.
pub fn ctw(a: &Trajectory, b: &Trajectory, cfg: &MeasureConfig) -> Result<CtwOutcome> {
    cfg.validate()?;
    let d = a.dim().min(b.dim());

    // Init: per-channel standardization truncated to the shared dimension.
    let std_a = standardize(a.frames(), "a")?;
    let std_b = standardize(b.frames(), "b")?;
    let mut proj_a = normalize_total_variance(std_a.columns(0, d).into_owned());
    let mut proj_b = normalize_total_variance(std_b.columns(0, d).into_owned());

    let mut prev_pairs: Option<Vec<(usize, usize)>> = None;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut discrepancy = f64::INFINITY;
    let mut final_pairs = Vec::new();

    while iterations < cfg.max_outer_iters {
        iterations += 1;
        let cost = pairwise_cost_frames(&proj_a, &proj_b, cfg.metric);
        let out = dtw_banded(&CostMatrix::precomputed(cost)?, cfg.band);
        discrepancy = out.discrepancy;
        final_pairs = out.path.pairs().to_vec();
        trace.push(discrepancy);

        if discrepancy == 0.0 || prev_pairs.as_deref() == Some(&final_pairs[..]) {
            converged = true;
            break;
        }
        if iterations == cfg.max_outer_iters {
            break;
        }
        let (va, vb, x_mean, y_mean) = cca_fit(a.frames(), b.frames(), &final_pairs, d);
        proj_a = project(a.frames(), &va, &x_mean);
        proj_b = project(b.frames(), &vb, &y_mean);
        prev_pairs = Some(final_pairs.clone());
    }

    Ok(CtwOutcome {
        result: MeasureResult {
            measure: Measure::Ctw,
            discrepancy,
            path: AlignmentPath::hard(final_pairs),
            iterations,
            converged,
            params: cfg.to_params(Measure::Ctw),
            objective_trace: trace,
        },
        projected_a: proj_a,
        projected_b: proj_b,
    })
}
