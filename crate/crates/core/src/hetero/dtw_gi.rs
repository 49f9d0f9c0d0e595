//! DTW with global invariances: joint optimization of a temporal alignment
//! and an orthonormal-plus-translation feature-space transform.
//!
//! Block-coordinate descent alternates a DTW (or soft-DTW) alignment step
//! with a weighted transform refit on the aligned pairs. The transform
//! always lifts the lower-dimensional sequence into the higher-dimensional
//! space; when `b` has more features than `a` the two are swapped
//! internally and the path is swapped back on the way out.

use nalgebra::DMatrix;

use crate::align::{
    dtw_banded, pairwise_cost_frames, soft_alignment_banded, soft_dtw_banded, CostMatrix,
    CostMetric,
};
use crate::error::Result;
use crate::hetero::transform::{fit_transform, FeatureTransform};
use crate::model::{AlignmentPath, Measure, MeasureConfig, MeasureResult, Trajectory};

/// A scored result plus the fitted transform (lower-dimensional side into
/// the higher-dimensional one).
#[derive(Debug, Clone)]
pub struct GiOutcome {
    pub result: MeasureResult,
    pub transform: FeatureTransform,
}

fn column_means(m: &DMatrix<f64>) -> nalgebra::DVector<f64> {
    let t = m.nrows() as f64;
    nalgebra::DVector::from_fn(m.ncols(), |j, _| m.column(j).sum() / t)
}

/// Orders the pair so the first element has the larger dimension.
fn ordered<'a>(a: &'a Trajectory, b: &'a Trajectory) -> (&'a Trajectory, &'a Trajectory, bool) {
    if a.dim() >= b.dim() {
        (a, b, false)
    } else {
        (b, a, true)
    }
}

/// Hard-alignment variant. Stops when the path repeats or the cost hits
/// zero; the discrepancy is the DTW cost under the final transform.
pub fn dtw_gi(a: &Trajectory, b: &Trajectory, cfg: &MeasureConfig) -> Result<GiOutcome> {
    cfg.validate()?;
    let (x, y, swapped) = ordered(a, b);
    let (xf, yf) = (x.frames(), y.frames());

    let mut transform =
        FeatureTransform::identity_lift(x.dim(), y.dim(), &column_means(xf), &column_means(yf));
    let mut prev_pairs: Option<Vec<(usize, usize)>> = None;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut discrepancy = f64::INFINITY;
    let mut final_pairs = Vec::new();

    while iterations < cfg.max_outer_iters {
        iterations += 1;
        let lifted = transform.apply(yf);
        let cost = pairwise_cost_frames(xf, &lifted, CostMetric::SqEuclidean);
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
        let weighted: Vec<(usize, usize, f64)> =
            final_pairs.iter().map(|&(i, j)| (i, j, 1.0)).collect();
        transform = fit_transform(xf, yf, &weighted)?;
        prev_pairs = Some(final_pairs.clone());
    }

    let path = AlignmentPath::hard(final_pairs);
    let path = if swapped { path.transposed() } else { path };
    Ok(GiOutcome {
        result: MeasureResult {
            measure: Measure::DtwGi,
            discrepancy,
            path,
            iterations,
            converged,
            params: cfg.to_params(Measure::DtwGi),
            objective_trace: trace,
        },
        transform,
    })
}

/// Soft-alignment variant: the alignment step is the soft expectation and
/// the refit uses the expectation entries as pair weights. Stops on the
/// relative change of the soft objective; the reported discrepancy is the
/// hard DTW cost under the final transform, so values are comparable with
/// [`dtw_gi`].
pub fn soft_dtw_gi(a: &Trajectory, b: &Trajectory, cfg: &MeasureConfig) -> Result<GiOutcome> {
    cfg.validate()?;
    let (x, y, swapped) = ordered(a, b);
    let (xf, yf) = (x.frames(), y.frames());

    let mut transform =
        FeatureTransform::identity_lift(x.dim(), y.dim(), &column_means(xf), &column_means(yf));
    let mut prev_soft = f64::INFINITY;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut final_state = None;

    while iterations < cfg.max_outer_iters {
        iterations += 1;
        let lifted = transform.apply(yf);
        let cost =
            CostMatrix::precomputed(pairwise_cost_frames(xf, &lifted, CostMetric::SqEuclidean))?;
        let soft_value = soft_dtw_banded(&cost, cfg.gamma, cfg.band)?;
        let sa = soft_alignment_banded(&cost, cfg.gamma, cfg.band)?;
        trace.push(soft_value);

        let rel = (prev_soft - soft_value).abs() / prev_soft.abs().max(f64::MIN_POSITIVE);
        final_state = Some((cost, sa));
        if rel < cfg.tol {
            converged = true;
            break;
        }
        prev_soft = soft_value;
        if iterations == cfg.max_outer_iters {
            break;
        }
        let e = final_state
            .as_ref()
            .map(|(_, sa)| sa.expectation())
            .unwrap();
        let mut weighted = Vec::with_capacity(e.len());
        for i in 0..e.nrows() {
            for j in 0..e.ncols() {
                let w = e[(i, j)];
                if w > 0.0 {
                    weighted.push((i, j, w));
                }
            }
        }
        transform = fit_transform(xf, yf, &weighted)?;
    }

    let (cost, sa) = final_state.expect("at least one iteration runs");
    let hard = dtw_banded(&cost, cfg.band);
    let discrepancy = hard.discrepancy;
    let path = AlignmentPath::soft(hard.path.pairs().to_vec(), sa.expectation().clone());
    let path = if swapped { path.transposed() } else { path };

    Ok(GiOutcome {
        result: MeasureResult {
            measure: Measure::SoftDtwGi,
            discrepancy,
            path,
            iterations,
            converged,
            params: cfg.to_params(Measure::SoftDtwGi),
            objective_trace: trace,
        },
        transform,
    })
}
