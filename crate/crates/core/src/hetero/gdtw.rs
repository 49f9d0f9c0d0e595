//! Gromov dynamic time warping: alignment of intra-sequence distance
//! structure, solved by majorize-minimize over warping paths.
//!
//! The objective of a path `p` is
//! `F(p) = sum over (i,j) in p, (k,l) in p of (Da(i,k) - Db(j,l))^2`,
//! which depends on the two self-distance matrices only, so the score is
//! invariant to any isometry of either feature space and the two
//! trajectories may have different dimensions.
//!
//! Each outer iteration freezes the current coupling `W`, builds the
//! surrogate cost `C[i][j] = sum_{k,l} W[k][l] (Da(i,k) - Db(j,l))^2`, and
//! re-solves a DTW over `C`. Iterates are accepted only when they lower
//! the objective, so the reported trace is nonincreasing and the returned
//! value is the best iterate seen.

use nalgebra::{DMatrix, DVector};

use crate::align::{
    dtw_banded, hard_path_from_soft, soft_alignment_banded, CostMatrix, CostMetric,
};
use crate::error::Result;
use crate::hetero::self_distance::{self_distance, SelfDistanceMatrix};
use crate::model::{
    AlignmentPath, InitStrategy, Measure, MeasureConfig, MeasureResult, Trajectory,
};

/// A coupling between index sets: either a hard path (unit weights) or a
/// dense weight matrix such as a soft expectation.
pub(crate) enum Coupling<'a> {
    Path(&'a [(usize, usize)]),
    Dense(&'a DMatrix<f64>),
}

/// The monotone unit-step path closest to linear index resampling; used as
/// the intended-correspondence initialization.
pub(crate) fn diagonal_path(t_a: usize, t_b: usize) -> Vec<(usize, usize)> {
    let steps = t_a.max(t_b);
    let mut pairs = Vec::with_capacity(steps);
    for s in 0..steps {
        let frac = if steps > 1 {
            s as f64 / (steps - 1) as f64
        } else {
            0.0
        };
        let i = (frac * (t_a - 1) as f64).round() as usize;
        let j = (frac * (t_b - 1) as f64).round() as usize;
        pairs.push((i, j));
    }
    pairs.dedup();
    pairs
}

/// Quadratic distortion of a path against two self-distance matrices.
pub(crate) fn quad_objective(
    da: &SelfDistanceMatrix,
    db: &SelfDistanceMatrix,
    pairs: &[(usize, usize)],
) -> f64 {
    let (da, db) = (da.values(), db.values());
    let mut acc = 0.0;
    for &(i, j) in pairs {
        for &(k, l) in pairs {
            let diff = da[(i, k)] - db[(j, l)];
            acc += diff * diff;
        }
    }
    acc
}

/// Surrogate cost of re-aligning against a frozen coupling, expanded as
/// `C = p 1^T + 1 q^T - 2 Da W Db` with `p, q` from the coupling marginals.
pub(crate) fn surrogate_cost(
    da: &SelfDistanceMatrix,
    db: &SelfDistanceMatrix,
    coupling: &Coupling<'_>,
) -> DMatrix<f64> {
    let (da, db) = (da.values(), db.values());
    let (t_a, t_b) = (da.nrows(), db.nrows());

    let (row_marginal, col_marginal, cross) = match coupling {
        Coupling::Path(pairs) => {
            let mut rsum = DVector::zeros(t_a);
            let mut csum = DVector::zeros(t_b);
            // W Db accumulated row-by-row over the sparse coupling.
            let mut wdb = DMatrix::zeros(t_a, t_b);
            for &(k, l) in *pairs {
                rsum[k] += 1.0;
                csum[l] += 1.0;
                for j in 0..t_b {
                    wdb[(k, j)] += db[(l, j)];
                }
            }
            (rsum, csum, da * wdb)
        }
        Coupling::Dense(w) => {
            let ones_b = DVector::from_element(t_b, 1.0);
            let ones_a = DVector::from_element(t_a, 1.0);
            let rsum = *w * &ones_b;
            let csum = w.transpose() * &ones_a;
            (rsum, csum, da * (*w * db)) // Db symmetric
        }
    };

    let da_sq = da.map(|v| v * v);
    let db_sq = db.map(|v| v * v);
    let p = da_sq * &row_marginal;
    let q = db_sq * &col_marginal;

    DMatrix::from_fn(t_a, t_b, |i, j| {
        (p[i] + q[j] - 2.0 * cross[(i, j)]).max(0.0)
    })
}

fn init_path(
    da: &SelfDistanceMatrix,
    db: &SelfDistanceMatrix,
    cfg: &MeasureConfig,
) -> Vec<(usize, usize)> {
    match cfg.init {
        InitStrategy::DiagonalPath => diagonal_path(da.len(), db.len()),
        InitStrategy::Uniform => {
            let w = DMatrix::from_element(da.len(), db.len(), 1.0 / (da.len() * db.len()) as f64);
            let cost = surrogate_cost(da, db, &Coupling::Dense(&w));
            dtw_banded(
                &CostMatrix::precomputed(cost).expect("surrogate is nonnegative"),
                cfg.band,
            )
            .path
            .pairs()
            .to_vec()
        }
    }
}

/// Gromov DTW. Dimensions of `a` and `b` may differ.
pub fn gdtw(a: &Trajectory, b: &Trajectory, cfg: &MeasureConfig) -> Result<MeasureResult> {
    cfg.validate()?;
    let da = self_distance(a, CostMetric::Euclidean)?;
    let db = self_distance(b, CostMetric::Euclidean)?;

    let mut best_pairs = init_path(&da, &db, cfg);
    let mut best_obj = quad_objective(&da, &db, &best_pairs);
    let mut trace = vec![best_obj];
    let mut prev_pairs = best_pairs.clone();
    let mut converged = best_obj == 0.0;
    let mut iterations = 0;

    while !converged && iterations < cfg.max_outer_iters {
        iterations += 1;
        let cost = surrogate_cost(&da, &db, &Coupling::Path(&prev_pairs));
        let out = dtw_banded(
            &CostMatrix::precomputed(cost).expect("surrogate is nonnegative"),
            cfg.band,
        );
        let pairs = out.path.pairs().to_vec();
        let obj = quad_objective(&da, &db, &pairs);

        if obj < best_obj {
            let rel = (best_obj - obj) / best_obj.max(f64::MIN_POSITIVE);
            best_obj = obj;
            best_pairs = pairs.clone();
            trace.push(obj);
            if rel < cfg.tol || obj == 0.0 {
                converged = true;
                break;
            }
        } else if pairs == prev_pairs {
            // Fixed point of the majorize-minimize map.
            converged = true;
            break;
        }
        prev_pairs = pairs;
    }

    Ok(MeasureResult {
        measure: Measure::Gdtw,
        discrepancy: best_obj,
        path: AlignmentPath::hard(best_pairs),
        iterations,
        converged,
        params: cfg.to_params(Measure::Gdtw),
        objective_trace: trace,
    })
}

/// Soft Gromov DTW: the surrogate coupling is the soft-alignment
/// expectation instead of a 0/1 path. The reported discrepancy is the hard
/// objective of the greedy path through the final expectation, so values
/// are comparable with [`gdtw`].
pub fn soft_gdtw(a: &Trajectory, b: &Trajectory, cfg: &MeasureConfig) -> Result<MeasureResult> {
    cfg.validate()?;
    let da = self_distance(a, CostMetric::Euclidean)?;
    let db = self_distance(b, CostMetric::Euclidean)?;
    let (t_a, t_b) = (da.len(), db.len());

    let mut coupling = match cfg.init {
        InitStrategy::DiagonalPath => {
            let mut w = DMatrix::zeros(t_a, t_b);
            for (i, j) in diagonal_path(t_a, t_b) {
                w[(i, j)] = 1.0;
            }
            w
        }
        InitStrategy::Uniform => DMatrix::from_element(t_a, t_b, 1.0 / (t_a * t_b) as f64),
    };
    let soft_objective = |w: &DMatrix<f64>| surrogate_cost(&da, &db, &Coupling::Dense(w)).dot(w);

    let mut prev_obj = soft_objective(&coupling);
    let mut trace = vec![prev_obj];
    let mut converged = false;
    let mut iterations = 0;
    let mut last_alignment = None;

    while !converged && iterations < cfg.max_outer_iters {
        iterations += 1;
        let cost = surrogate_cost(&da, &db, &Coupling::Dense(&coupling));
        let sa = soft_alignment_banded(
            &CostMatrix::precomputed(cost).expect("surrogate is nonnegative"),
            cfg.gamma,
            cfg.band,
        )?;
        coupling = sa.expectation().clone();
        last_alignment = Some(sa);
        let obj = soft_objective(&coupling);
        trace.push(obj);
        let rel = (prev_obj - obj).abs() / prev_obj.abs().max(f64::MIN_POSITIVE);
        if rel < cfg.tol {
            converged = true;
        }
        prev_obj = obj;
    }

    let sa = last_alignment.expect("max_outer_iters >= 1 runs at least one iteration");
    let pairs = hard_path_from_soft(&sa).pairs().to_vec();
    let discrepancy = quad_objective(&da, &db, &pairs);

    Ok(MeasureResult {
        measure: Measure::SoftGdtw,
        discrepancy,
        path: AlignmentPath::soft(pairs, sa.expectation().clone()),
        iterations,
        converged,
        params: cfg.to_params(Measure::SoftGdtw),
        objective_trace: trace,
    })
}
