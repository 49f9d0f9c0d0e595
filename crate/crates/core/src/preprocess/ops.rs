//! The data pipeline: keypoint selection, mirror augmentation, resampling,
//! and gradient-magnitude-assisted soft alignment of heterogeneous pairs.

use nalgebra::DMatrix;

use crate::align::{hard_path_from_soft, soft_alignment, CostMatrix};
use crate::error::{Error, Result};
use crate::model::{AlignmentPath, Trajectory};
use crate::preprocess::schema::{KeypointSchema, RobotMirrorSpec};

/// Keeps only the named keypoints, in `keep` order. Output dimension is
/// `|keep| * dims_per_keypoint`; the id gains a `.selected` suffix.
pub fn select_keypoints(
    a: &Trajectory,
    schema: &KeypointSchema,
    keep: &[String],
) -> Result<Trajectory> {
    schema.validate()?;
    if a.dim() != schema.feature_dim() {
        return Err(Error::Schema(format!(
            "trajectory dimension {} does not match schema dimension {}",
            a.dim(),
            schema.feature_dim()
        )));
    }
    let dpk = schema.dims_per_keypoint;
    let mut columns = Vec::with_capacity(keep.len() * dpk);
    for name in keep {
        let k = schema.index_of(name)?;
        for c in 0..dpk {
            columns.push(k * dpk + c);
        }
    }
    let frames = DMatrix::from_fn(a.len(), columns.len(), |i, j| a.frames()[(i, columns[j])]);
    Trajectory::new(
        format!("{}.selected", a.id()),
        a.sample_rate_hz(),
        frames,
        None,
    )
}

/// Mirrors a human/robot pair: the human side swaps each left/right
/// keypoint block and negates the mirror-axis coordinate of every
/// keypoint; the robot side negates exactly the listed channels. Applying
/// the operation twice restores the inputs bit-exactly.
pub fn mirror_pair(
    h: &Trajectory,
    r: &Trajectory,
    schema: &KeypointSchema,
    rspec: &RobotMirrorSpec,
) -> Result<(Trajectory, Trajectory)> {
    schema.validate()?;
    rspec.validate(r.dim())?;
    if h.dim() != schema.feature_dim() {
        return Err(Error::Schema(format!(
            "human dimension {} does not match schema dimension {}",
            h.dim(),
            schema.feature_dim()
        )));
    }

    let dpk = schema.dims_per_keypoint;
    let k = schema.keypoint_names.len();
    // Column permutation from the keypoint swap.
    let mut source_keypoint: Vec<usize> = (0..k).collect();
    for &(l, rk) in &schema.mirror_pairs {
        source_keypoint[l] = rk;
        source_keypoint[rk] = l;
    }
    let mirrored_h = DMatrix::from_fn(h.len(), h.dim(), |i, j| {
        let (kp, c) = (j / dpk, j % dpk);
        let v = h.frames()[(i, source_keypoint[kp] * dpk + c)];
        if c == schema.mirror_axis {
            -v
        } else {
            v
        }
    });
    let mirrored_r = DMatrix::from_fn(r.len(), r.dim(), |i, j| {
        let v = r.frames()[(i, j)];
        if rspec.negate_channels.contains(&j) {
            -v
        } else {
            v
        }
    });

    Ok((
        Trajectory::new(
            h.id(),
            h.sample_rate_hz(),
            mirrored_h,
            h.feature_names().map(<[String]>::to_vec),
        )?,
        Trajectory::new(
            r.id(),
            r.sample_rate_hz(),
            mirrored_r,
            r.feature_names().map(<[String]>::to_vec),
        )?,
    ))
}

/// Linear interpolation onto the uniform grid spanning the input's time
/// range at `target_hz`.
pub fn resample(a: &Trajectory, target_hz: f64) -> Result<Trajectory> {
    if !(target_hz.is_finite() && target_hz > 0.0) {
        return Err(Error::Parameter(format!(
            "target_hz must be positive, got {target_hz}"
        )));
    }
    let t_end = (a.len() - 1) as f64 / a.sample_rate_hz();
    // Small slack so an exact multiple keeps its endpoint.
    let n = ((t_end * target_hz) * (1.0 + 1e-12)).floor() as usize + 1;
    if n < 2 {
        return Err(Error::Parameter(format!(
            "resampling to {target_hz} Hz leaves fewer than 2 frames"
        )));
    }
    let frames = DMatrix::from_fn(n, a.dim(), |i, j| {
        let t = i as f64 / target_hz;
        let pos = t * a.sample_rate_hz();
        let lo = (pos.floor() as usize).min(a.len() - 1);
        let hi = (lo + 1).min(a.len() - 1);
        let frac = pos - lo as f64;
        a.frames()[(lo, j)] * (1.0 - frac) + a.frames()[(hi, j)] * frac
    });
    Trajectory::new(
        a.id(),
        target_hz,
        frames,
        a.feature_names().map(<[String]>::to_vec),
    )
}

/// Speed profile: the norm of the frame derivative at every index,
/// normalized by its own maximum so profiles from differently scaled
/// sources are comparable. Central differences inside, one-sided at the
/// ends; an all-zero profile stays all zeros.
pub fn gradient_magnitude(a: &Trajectory) -> Trajectory {
    let t = a.len();
    let hz = a.sample_rate_hz();
    let mut values = Vec::with_capacity(t);
    for i in 0..t {
        let mut acc = 0.0;
        for j in 0..a.dim() {
            let d = if i == 0 {
                a.frames()[(1, j)] - a.frames()[(0, j)]
            } else if i == t - 1 {
                a.frames()[(t - 1, j)] - a.frames()[(t - 2, j)]
            } else {
                (a.frames()[(i + 1, j)] - a.frames()[(i - 1, j)]) / 2.0
            };
            acc += d * d;
        }
        values.push(acc.sqrt() * hz);
    }
    let max = values.iter().cloned().fold(0.0f64, f64::max);
    if max > 0.0 {
        for v in &mut values {
            *v /= max;
        }
    }
    let frames = DMatrix::from_fn(t, 1, |i, _| values[i]);
    Trajectory::new(a.id(), hz, frames, None).expect("gradient profile is well-formed")
}

/// Time-aligns a heterogeneous pair via soft-DTW on the gradient-magnitude
/// profiles, then re-times `r` onto `h`'s timeline by averaging the
/// `r`-frames mapped to each `h` index. `lambda` defaults to 1 when the
/// raw dimensions match (adding a dimension-normalized raw-feature term to
/// the alignment cost) and to 0 otherwise.
pub fn align_pair(
    h: &Trajectory,
    r: &Trajectory,
    gamma: f64,
) -> Result<(Trajectory, Trajectory, AlignmentPath)> {
    let lambda = if h.dim() == r.dim() { 1.0 } else { 0.0 };
    align_pair_weighted(h, r, gamma, lambda)
}

pub fn align_pair_weighted(
    h: &Trajectory,
    r: &Trajectory,
    gamma: f64,
    lambda: f64,
) -> Result<(Trajectory, Trajectory, AlignmentPath)> {
    if lambda < 0.0 || !lambda.is_finite() {
        return Err(Error::Parameter(format!(
            "lambda must be nonnegative, got {lambda}"
        )));
    }
    if lambda > 0.0 && h.dim() != r.dim() {
        return Err(Error::Parameter(
            "raw-feature cost term needs matching dimensions; set lambda to 0".into(),
        ));
    }
    let gh = gradient_magnitude(h);
    let gr = gradient_magnitude(r);
    let d = h.dim() as f64;
    let cost = DMatrix::from_fn(h.len(), r.len(), |i, j| {
        let g = gh.frames()[(i, 0)] - gr.frames()[(j, 0)];
        let mut c = g * g;
        if lambda > 0.0 {
            let mut raw = 0.0;
            for k in 0..h.dim() {
                let diff = h.frames()[(i, k)] - r.frames()[(j, k)];
                raw += diff * diff;
            }
            c += lambda * raw / d;
        }
        c
    });
    let sa = soft_alignment(&CostMatrix::precomputed(cost)?, gamma)?;
    let path = hard_path_from_soft(&sa);

    // Average the r-frames mapped to each h index.
    let mut sums = DMatrix::<f64>::zeros(h.len(), r.dim());
    let mut counts = vec![0.0f64; h.len()];
    for &(i, j) in path.pairs() {
        for k in 0..r.dim() {
            sums[(i, k)] += r.frames()[(j, k)];
        }
        counts[i] += 1.0;
    }
    let frames = DMatrix::from_fn(h.len(), r.dim(), |i, k| sums[(i, k)] / counts[i]);
    let aligned_r = Trajectory::new(
        format!("{}.aligned", r.id()),
        h.sample_rate_hz(),
        frames,
        r.feature_names().map(<[String]>::to_vec),
    )?;
    Ok((h.clone(), aligned_r, path))
}
