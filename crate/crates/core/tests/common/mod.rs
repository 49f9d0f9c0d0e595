//! Shared helpers for the integration suites: a self-contained random
//! source and brute-force oracles kept independent of the library's
//! solver internals.

#![allow(dead_code)]

use nalgebra::DMatrix;

/// splitmix64; local copy so oracle inputs do not depend on library code.
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.f64()
    }

    pub fn below(&mut self, bound: usize) -> usize {
        ((self.f64() * bound as f64) as usize).min(bound - 1)
    }

    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.f64();
        let u2 = self.f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// Exhaustive minimum summed cost over all monotone unit-step paths,
/// walking the full path tree from the top-left cell.
pub fn enumerated_min_cost(c: &DMatrix<f64>) -> f64 {
    fn go(c: &DMatrix<f64>, i: usize, j: usize) -> f64 {
        let (ta, tb) = (c.nrows(), c.ncols());
        let here = c[(i, j)];
        if i == ta - 1 && j == tb - 1 {
            return here;
        }
        let mut best = f64::INFINITY;
        if i + 1 < ta && j + 1 < tb {
            best = best.min(go(c, i + 1, j + 1));
        }
        if i + 1 < ta {
            best = best.min(go(c, i + 1, j));
        }
        if j + 1 < tb {
            best = best.min(go(c, i, j + 1));
        }
        here + best
    }
    go(c, 0, 0)
}

/// All monotone unit-step paths from (0,0) to the bottom-right corner.
pub fn enumerate_paths(ta: usize, tb: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut current = vec![(0usize, 0usize)];
    fn go(
        ta: usize,
        tb: usize,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let &(i, j) = current.last().unwrap();
        if i == ta - 1 && j == tb - 1 {
            out.push(current.clone());
            return;
        }
        for (ni, nj) in [(i + 1, j + 1), (i + 1, j), (i, j + 1)] {
            if ni < ta && nj < tb {
                current.push((ni, nj));
                go(ta, tb, current, out);
                current.pop();
            }
        }
    }
    go(ta, tb, &mut current, &mut out);
    out
}

/// Quadratic distance-structure distortion of a path, written directly
/// from the double-sum definition.
pub fn quad_objective(da: &DMatrix<f64>, db: &DMatrix<f64>, path: &[(usize, usize)]) -> f64 {
    let mut acc = 0.0;
    for &(i, j) in path {
        for &(k, l) in path {
            let diff = da[(i, k)] - db[(j, l)];
            acc += diff * diff;
        }
    }
    acc
}

/// Euclidean self-distance matrix, written directly from the definition.
pub fn euclidean_self_distance(frames: &DMatrix<f64>) -> DMatrix<f64> {
    let t = frames.nrows();
    DMatrix::from_fn(t, t, |i, k| {
        let mut acc = 0.0;
        for c in 0..frames.ncols() {
            let d = frames[(i, c)] - frames[(k, c)];
            acc += d * d;
        }
        acc.sqrt()
    })
}

/// The linear index-resampling path, as the solvers define their
/// initialization.
pub fn diagonal_path(ta: usize, tb: usize) -> Vec<(usize, usize)> {
    let steps = ta.max(tb);
    let mut pairs = Vec::with_capacity(steps);
    for s in 0..steps {
        let frac = if steps > 1 {
            s as f64 / (steps - 1) as f64
        } else {
            0.0
        };
        pairs.push((
            (frac * (ta - 1) as f64).round() as usize,
            (frac * (tb - 1) as f64).round() as usize,
        ));
    }
    pairs.dedup();
    pairs
}

/// Random orthogonal matrix via QR of a Gaussian draw.
pub fn random_orthogonal(d: usize, rng: &mut TestRng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(d, d, |_, _| rng.normal());
    g.qr().q()
}

/// Random matrix with orthonormal columns.
pub fn random_orthonormal_cols(rows: usize, cols: usize, rng: &mut TestRng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(rows, cols, |_, _| rng.normal());
    g.qr().q()
}
