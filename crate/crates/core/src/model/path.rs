//! Alignment paths between two sequences and the path validity predicate.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathMode {
    Hard,
    Soft,
}

/// A monotone mapping between two index sets.
///
/// Hard paths are step sequences from `(0,0)` to `(T_a-1, T_b-1)`; soft
/// paths additionally carry the full `T_a x T_b` weight matrix. The weight
/// matrix is not part of the JSON form (it is exported through the path CSV
/// serializer instead).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentPath {
    pairs: Vec<(usize, usize)>,
    mode: PathMode,
    #[serde(skip)]
    weights: Option<DMatrix<f64>>,
}

impl AlignmentPath {
    pub fn hard(pairs: Vec<(usize, usize)>) -> Self {
        Self {
            pairs,
            mode: PathMode::Hard,
            weights: None,
        }
    }

    pub fn soft(pairs: Vec<(usize, usize)>, weights: DMatrix<f64>) -> Self {
        Self {
            pairs,
            mode: PathMode::Soft,
            weights: Some(weights),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn mode(&self) -> PathMode {
        self.mode
    }

    pub fn weights(&self) -> Option<&DMatrix<f64>> {
        self.weights.as_ref()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Swaps the two index sets (and transposes soft weights).
    pub fn transposed(&self) -> Self {
        Self {
            pairs: self.pairs.iter().map(|&(i, j)| (j, i)).collect(),
            mode: self.mode,
            weights: self.weights.as_ref().map(|w| w.transpose()),
        }
    }

    /// CSV export: `i,j` rows for hard paths, `i,j,weight` for soft ones.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        match self.mode {
            PathMode::Hard => {
                out.push_str("i,j\n");
                for &(i, j) in &self.pairs {
                    out.push_str(&format!("{i},{j}\n"));
                }
            }
            PathMode::Soft => {
                out.push_str("i,j,weight\n");
                for &(i, j) in &self.pairs {
                    let w = self.weights.as_ref().map(|m| m[(i, j)]).unwrap_or(f64::NAN);
                    out.push_str(&format!("{i},{j},{:.16e}\n", w));
                }
            }
        }
        out
    }
}

/// Checks the alignment-path contract against sequence lengths.
///
/// Hard mode: starts at `(0,0)`, ends at `(T_a-1, T_b-1)`, every step
/// increments `i`, `j`, or both by exactly one. Soft mode: a weight matrix
/// of the right shape, nonnegative, with at least one strictly positive
/// entry in every row and every column.
pub fn validate_path(path: &AlignmentPath, t_a: usize, t_b: usize) -> bool {
    match path.mode {
        PathMode::Hard => {
            let pairs = &path.pairs;
            if pairs.is_empty() {
                return false;
            }
            if pairs[0] != (0, 0) || *pairs.last().unwrap() != (t_a - 1, t_b - 1) {
                return false;
            }
            if pairs.iter().any(|&(i, j)| i >= t_a || j >= t_b) {
                return false;
            }
            pairs.windows(2).all(|w| {
                let (i0, j0) = w[0];
                let (i1, j1) = w[1];
                let (di, dj) = (i1 as i64 - i0 as i64, j1 as i64 - j0 as i64);
                matches!((di, dj), (1, 0) | (0, 1) | (1, 1))
            })
        }
        PathMode::Soft => {
            let Some(w) = &path.weights else { return false };
            if w.nrows() != t_a || w.ncols() != t_b {
                return false;
            }
            if w.iter().any(|&v| !v.is_finite() || v < 0.0) {
                return false;
            }
            let rows_ok = (0..t_a).all(|i| (0..t_b).any(|j| w[(i, j)] > 0.0));
            let cols_ok = (0..t_b).all(|j| (0..t_a).any(|i| w[(i, j)] > 0.0));
            rows_ok && cols_ok
        }
    }
}
