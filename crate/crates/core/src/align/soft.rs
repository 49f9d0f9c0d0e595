//! Soft dynamic time warping: smoothed values, expected alignments, and
//! hard-path extraction.
//!
//! The soft value replaces the minimum in the DTW recurrence with
//! `softmin_g(x...) = -g * ln(sum(exp(-x_i / g)))`, stabilized by factoring
//! out the largest exponent. The expected alignment is the gradient of the
//! soft value with respect to the cost matrix, computed by the standard
//! forward-backward pass; entry `(i, j)` is the probability that a path
//! drawn from the Gibbs distribution over monotone paths visits `(i, j)`.

use nalgebra::DMatrix;

use crate::align::cost::CostMatrix;
use crate::align::dtw::within_band;
use crate::error::{Error, Result};
use crate::model::AlignmentPath;

/// Expected-alignment matrix for one cost matrix and smoothing `gamma`.
#[derive(Debug, Clone)]
pub struct SoftAlignment {
    expectation: DMatrix<f64>,
    gamma: f64,
}

impl SoftAlignment {
    /// Entries in `[0, 1]`; the two corner cells are exactly 1.
    pub fn expectation(&self) -> &DMatrix<f64> {
        &self.expectation
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Parameter(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    Ok(())
}

/// Stabilized three-way soft minimum.
fn softmin3(a: f64, b: f64, c: f64, gamma: f64) -> f64 {
    let m = (-a / gamma).max(-b / gamma).max(-c / gamma);
    if m == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    let sum = (-a / gamma - m).exp() + (-b / gamma - m).exp() + (-c / gamma - m).exp();
    -gamma * (m + sum.ln())
}

/// Forward accumulation table of the soft recurrence.
fn forward(c: &DMatrix<f64>, gamma: f64, band: Option<usize>) -> DMatrix<f64> {
    let (ta, tb) = (c.nrows(), c.ncols());
    let mut r = DMatrix::from_element(ta, tb, f64::INFINITY);
    for i in 0..ta {
        for j in 0..tb {
            if !within_band(i, j, ta, tb, band) {
                continue;
            }
            r[(i, j)] = match (i, j) {
                (0, 0) => c[(0, 0)],
                (0, _) => c[(0, j)] + r[(0, j - 1)],
                (_, 0) => c[(i, 0)] + r[(i - 1, 0)],
                _ => c[(i, j)] + softmin3(r[(i - 1, j - 1)], r[(i - 1, j)], r[(i, j - 1)], gamma),
            };
        }
    }
    r
}

/// Soft-DTW discrepancy. May be negative for small `gamma`; always at most
/// the hard DTW value on the same cost.
pub fn soft_dtw(cost: &CostMatrix, gamma: f64) -> Result<f64> {
    soft_dtw_banded(cost, gamma, None)
}

pub fn soft_dtw_banded(cost: &CostMatrix, gamma: f64, band: Option<usize>) -> Result<f64> {
    check_gamma(gamma)?;
    let r = forward(cost.values(), gamma, band);
    Ok(r[(r.nrows() - 1, r.ncols() - 1)])
}

/// Expected alignment: the sensitivity of [`soft_dtw`] to each cost cell.
pub fn soft_alignment(cost: &CostMatrix, gamma: f64) -> Result<SoftAlignment> {
    soft_alignment_banded(cost, gamma, None)
}

pub fn soft_alignment_banded(
    cost: &CostMatrix,
    gamma: f64,
    band: Option<usize>,
) -> Result<SoftAlignment> {
    check_gamma(gamma)?;
    let c = cost.values();
    let (ta, tb) = (c.nrows(), c.ncols());
    let r = forward(c, gamma, band);

    // e[(i,j)] = sum over in-bounds successors of the successor's weight on
    // this predecessor; out-of-band cells stay zero.
    let mut e = DMatrix::zeros(ta, tb);
    e[(ta - 1, tb - 1)] = 1.0;
    for i in (0..ta).rev() {
        for j in (0..tb).rev() {
            if (i, j) == (ta - 1, tb - 1) || !r[(i, j)].is_finite() {
                continue;
            }
            let mut acc = 0.0;
            if i + 1 < ta && r[(i + 1, j)].is_finite() {
                acc += e[(i + 1, j)] * ((r[(i + 1, j)] - r[(i, j)] - c[(i + 1, j)]) / gamma).exp();
            }
            if j + 1 < tb && r[(i, j + 1)].is_finite() {
                acc += e[(i, j + 1)] * ((r[(i, j + 1)] - r[(i, j)] - c[(i, j + 1)]) / gamma).exp();
            }
            if i + 1 < ta && j + 1 < tb && r[(i + 1, j + 1)].is_finite() {
                acc += e[(i + 1, j + 1)]
                    * ((r[(i + 1, j + 1)] - r[(i, j)] - c[(i + 1, j + 1)]) / gamma).exp();
            }
            e[(i, j)] = acc.clamp(0.0, 1.0);
        }
    }
    // Every path visits both corners, so their sensitivities are exactly 1.
    e[(0, 0)] = 1.0;
    e[(ta - 1, tb - 1)] = 1.0;

    Ok(SoftAlignment {
        expectation: e,
        gamma,
    })
}

/// Greedy monotone walk through the expectation matrix, from `(0,0)` to the
/// far corner, choosing the successor with maximal expectation; ties prefer
/// the diagonal, then the vertical step.
pub fn hard_path_from_soft(sa: &SoftAlignment) -> AlignmentPath {
    let e = &sa.expectation;
    let (ta, tb) = (e.nrows(), e.ncols());
    let mut pairs = vec![(0usize, 0usize)];
    let (mut i, mut j) = (0, 0);
    while (i, j) != (ta - 1, tb - 1) {
        let mut best = f64::NEG_INFINITY;
        let mut next = (i, j);
        let candidates = [
            (i + 1, j + 1), // diagonal first: wins ties
            (i + 1, j),
            (i, j + 1),
        ];
        for (ci, cj) in candidates {
            if ci < ta && cj < tb && e[(ci, cj)] > best {
                best = e[(ci, cj)];
                next = (ci, cj);
            }
        }
        pairs.push(next);
        (i, j) = next;
    }
    AlignmentPath::hard(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::align::cost::{pairwise_cost, CostMetric};
    use crate::align::dtw::dtw;
    use crate::model::{validate_path, Trajectory};

    struct Lcg(u64);
    impl Lcg {
        fn next_f64(&mut self) -> f64 {
            self.0 = self
                .0
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (self.0 >> 11) as f64 / (1u64 << 53) as f64
        }
    }

    fn ramp(t: usize) -> Trajectory {
        Trajectory::from_rows(
            "ramp",
            10.0,
            &(0..t).map(|i| vec![i as f64]).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn identical_sequences_value_is_small_negative() {
        let a = ramp(8);
        let cost = pairwise_cost(&a, &a, CostMetric::SqEuclidean).unwrap();
        let gamma = 0.1;
        let v = soft_dtw(&cost, gamma).unwrap();
        assert!(
            v <= 0.0,
            "soft value {v} should not exceed the hard value 0"
        );
        assert!(
            v >= -gamma * a.len() as f64 * 3.0f64.ln(),
            "soft value {v} below the softmin-of-zeros bound"
        );
    }

    #[test]
    fn soft_value_never_exceeds_hard_value() {
        let mut rng = Lcg(99);
        for _ in 0..60 {
            let ta = 2 + (rng.next_f64() * 6.0) as usize;
            let tb = 2 + (rng.next_f64() * 6.0) as usize;
            let c = nalgebra::DMatrix::from_fn(ta, tb, |_, _| rng.next_f64() * 2.0);
            let cost = CostMatrix::precomputed(c).unwrap();
            let hard = dtw(&cost).discrepancy;
            for gamma in [1e-3, 0.1, 1.0] {
                assert!(soft_dtw(&cost, gamma).unwrap() <= hard + 1e-12);
            }
        }
    }

    #[test]
    fn tiny_gamma_matches_hard_dtw() {
        let mut rng = Lcg(3);
        for _ in 0..40 {
            let ta = 2 + (rng.next_f64() * 4.0) as usize;
            let tb = 2 + (rng.next_f64() * 4.0) as usize;
            let c = nalgebra::DMatrix::from_fn(ta, tb, |_, _| rng.next_f64() * 2.0);
            let cost = CostMatrix::precomputed(c).unwrap();
            let hard = dtw(&cost).discrepancy;
            let soft = soft_dtw(&cost, 1e-4).unwrap();
            assert!((hard - soft).abs() < 1e-2, "hard {hard} soft {soft}");
        }
    }

    #[test]
    fn value_is_nonincreasing_in_gamma() {
        let mut rng = Lcg(11);
        for _ in 0..30 {
            let c = nalgebra::DMatrix::from_fn(6, 5, |_, _| rng.next_f64() * 2.0);
            let cost = CostMatrix::precomputed(c).unwrap();
            let vals: Vec<f64> = [1e-3, 1e-2, 1e-1, 1.0]
                .iter()
                .map(|&g| soft_dtw(&cost, g).unwrap())
                .collect();
            for w in vals.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "values not nonincreasing: {vals:?}");
            }
        }
    }

    #[test]
    fn corner_cells_are_exactly_one() {
        let a = Trajectory::from_rows("z", 10.0, &[vec![0.0], vec![0.0]]).unwrap();
        let cost = pairwise_cost(&a, &a, CostMetric::SqEuclidean).unwrap();
        let sa = soft_alignment(&cost, 1.0).unwrap();
        assert_eq!(sa.expectation()[(0, 0)], 1.0);
        assert_eq!(sa.expectation()[(1, 1)], 1.0);
        assert!(sa.expectation().iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn expectation_matches_finite_differences() {
        let mut rng = Lcg(2024);
        let eps = 1e-5;
        for gamma in [0.1, 1.0] {
            for _ in 0..8 {
                let c = nalgebra::DMatrix::from_fn(5, 5, |_, _| rng.next_f64() * 2.0 + 0.5);
                let sa =
                    soft_alignment(&CostMatrix::precomputed(c.clone()).unwrap(), gamma).unwrap();
                let mut max_err: f64 = 0.0;
                for i in 0..5 {
                    for j in 0..5 {
                        let mut plus = c.clone();
                        plus[(i, j)] += eps;
                        let mut minus = c.clone();
                        minus[(i, j)] -= eps;
                        let fd = (soft_dtw(&CostMatrix::precomputed(plus).unwrap(), gamma)
                            .unwrap()
                            - soft_dtw(&CostMatrix::precomputed(minus).unwrap(), gamma).unwrap())
                            / (2.0 * eps);
                        max_err = max_err.max((fd - sa.expectation()[(i, j)]).abs());
                    }
                }
                assert!(max_err < 1e-4, "gradient check failed: {max_err:.3e}");
            }
        }
    }

    #[test]
    fn tiny_gamma_greedy_path_equals_dtw_path() {
        let mut rng = Lcg(77);
        for _ in 0..40 {
            let ta = 3 + (rng.next_f64() * 4.0) as usize;
            let tb = 3 + (rng.next_f64() * 4.0) as usize;
            let c = nalgebra::DMatrix::from_fn(ta, tb, |_, _| rng.next_f64() * 2.0 + 0.1);
            let cost = CostMatrix::precomputed(c).unwrap();
            let hard = dtw(&cost);
            let sa = soft_alignment(&cost, 1e-4).unwrap();
            let greedy = hard_path_from_soft(&sa);
            assert_eq!(greedy.pairs(), hard.path.pairs());
            assert!(validate_path(&greedy, ta, tb));
        }
    }

    #[test]
    fn identity_dominated_expectation_walks_the_diagonal() {
        let a = ramp(5);
        let cost = pairwise_cost(&a, &a, CostMetric::SqEuclidean).unwrap();
        let sa = soft_alignment(&cost, 0.5).unwrap();
        let path = hard_path_from_soft(&sa);
        let diag: Vec<(usize, usize)> = (0..5).map(|i| (i, i)).collect();
        assert_eq!(path.pairs(), &diag[..]);
    }

    #[test]
    fn rejects_nonpositive_gamma() {
        let c = nalgebra::DMatrix::from_element(2, 2, 1.0);
        let cost = CostMatrix::precomputed(c).unwrap();
        assert!(soft_dtw(&cost, 0.0).is_err());
        assert!(soft_alignment(&cost, -1.0).is_err());
    }
}
