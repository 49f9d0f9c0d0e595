//! Hard dynamic time warping with alignment-path backtracking.

use crate::align::cost::CostMatrix;
use crate::model::AlignmentPath;

/// DTW value plus the path achieving it.
#[derive(Debug, Clone)]
pub struct DtwOutcome {
    pub discrepancy: f64,
    pub path: AlignmentPath,
}

/// `true` if cell `(i, j)` lies inside the (slanted) Sakoe-Chiba band.
/// `None` admits every cell.
pub(crate) fn within_band(i: usize, j: usize, ta: usize, tb: usize, band: Option<usize>) -> bool {
    let Some(r) = band else { return true };
    let r = r as f64;
    let slope_ab = (tb as f64 - 1.0) / (ta as f64 - 1.0).max(1.0);
    let slope_ba = (ta as f64 - 1.0) / (tb as f64 - 1.0).max(1.0);
    (j as f64 - (i as f64 * slope_ab).round()).abs() <= r
        || (i as f64 - (j as f64 * slope_ba).round()).abs() <= r
}

/// Minimizes the summed cost over all monotone unit-step paths.
///
/// Recurrence: `R(i,j) = c(i,j) + min(R(i-1,j-1), R(i-1,j), R(i,j-1))`,
/// ties broken by preferring the diagonal, then the vertical `(i-1,j)`,
/// then the horizontal `(i,j-1)` predecessor, so outputs are deterministic.
pub fn dtw(cost: &CostMatrix) -> DtwOutcome {
    dtw_banded(cost, None)
}

/// [`dtw`] restricted to a band of cells around the resampled diagonal.
pub fn dtw_banded(cost: &CostMatrix, band: Option<usize>) -> DtwOutcome {
    let c = cost.values();
    let (ta, tb) = (c.nrows(), c.ncols());
    let idx = |i: usize, j: usize| i * tb + j;

    const DIAG: u8 = 0;
    const VERT: u8 = 1;
    const HORIZ: u8 = 2;

    let mut acc = vec![f64::INFINITY; ta * tb];
    let mut from = vec![DIAG; ta * tb];

    for i in 0..ta {
        for j in 0..tb {
            if !within_band(i, j, ta, tb, band) {
                continue;
            }
            let cell = c[(i, j)];
            let (value, step) = match (i, j) {
                (0, 0) => (cell, DIAG),
                (0, _) => (cell + acc[idx(0, j - 1)], HORIZ),
                (_, 0) => (cell + acc[idx(i - 1, 0)], VERT),
                _ => {
                    let mut best = acc[idx(i - 1, j - 1)];
                    let mut step = DIAG;
                    let vert = acc[idx(i - 1, j)];
                    if vert < best {
                        best = vert;
                        step = VERT;
                    }
                    let horiz = acc[idx(i, j - 1)];
                    if horiz < best {
                        best = horiz;
                        step = HORIZ;
                    }
                    (cell + best, step)
                }
            };
            acc[idx(i, j)] = value;
            from[idx(i, j)] = step;
        }
    }

    let mut pairs = Vec::with_capacity(ta + tb);
    let (mut i, mut j) = (ta - 1, tb - 1);
    loop {
        pairs.push((i, j));
        if i == 0 && j == 0 {
            break;
        }
        match from[idx(i, j)] {
            DIAG if i > 0 && j > 0 => {
                i -= 1;
                j -= 1;
            }
            VERT => i -= 1,
            _ => j -= 1,
        }
    }
    pairs.reverse();

    DtwOutcome {
        discrepancy: acc[idx(ta - 1, tb - 1)],
        path: AlignmentPath::hard(pairs),
    }
}
