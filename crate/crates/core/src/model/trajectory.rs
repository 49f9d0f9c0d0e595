//! Uniformly sampled multivariate time series and its file formats.
//!
//! Two formats are supported, both loss-free for `f64` frames:
//!
//! * CSV with header `t,f0,...,f{D-1}` (UTF-8, `.` decimals, LF endings),
//!   values written with 17 significant digits so a save/load round trip
//!   reproduces frames bit-exactly.
//! * JSONL with one object per line: `{"t": <real>, "features": [<real>...]}`.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::error::{Error, Result};

/// Maximum allowed coefficient of variation of the time deltas before a
/// file is rejected as irregularly sampled.
pub const MAX_DELTA_T_CV: f64 = 0.01;

/// A motion trajectory: `T` frames of `D` features sampled at a fixed rate.
///
/// Immutable after construction; cheap to clone and safe to share across
/// worker threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    id: String,
    sample_rate_hz: f64,
    frames: DMatrix<f64>,
    feature_names: Option<Vec<String>>,
}

impl Trajectory {
    /// Builds a trajectory from a `T x D` frame matrix, validating the type
    /// invariants: at least two frames, at least one feature, all values
    /// finite, positive sample rate.
    pub fn new(
        id: impl Into<String>,
        sample_rate_hz: f64,
        frames: DMatrix<f64>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        if frames.nrows() < 2 {
            return Err(Error::Shape(format!(
                "trajectory needs at least 2 frames, got {}",
                frames.nrows()
            )));
        }
        if frames.ncols() < 1 {
            return Err(Error::Shape("trajectory needs at least 1 feature".into()));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::Parameter(format!(
                "sample_rate_hz must be positive, got {sample_rate_hz}"
            )));
        }
        if frames.iter().any(|v| !v.is_finite()) {
            return Err(Error::Shape("trajectory contains non-finite values".into()));
        }
        if let Some(names) = &feature_names {
            if names.len() != frames.ncols() {
                return Err(Error::Shape(format!(
                    "{} feature names for {} columns",
                    names.len(),
                    frames.ncols()
                )));
            }
        }
        Ok(Self {
            id: id.into(),
            sample_rate_hz,
            frames,
            feature_names,
        })
    }

    /// Convenience constructor from row-major frame data.
    pub fn from_rows(
        id: impl Into<String>,
        sample_rate_hz: f64,
        rows: &[Vec<f64>],
    ) -> Result<Self> {
        let t = rows.len();
        let d = rows.first().map(|r| r.len()).unwrap_or(0);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::Shape("rows have inconsistent dimensions".into()));
        }
        let frames = DMatrix::from_fn(t, d, |i, j| rows[i][j]);
        Self::new(id, sample_rate_hz, frames, None)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Returns a copy with a different id, keeping frames and rate.
    pub fn renamed(&self, id: impl Into<String>) -> Self {
        let mut out = self.clone();
        out.id = id.into();
        out
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    /// Number of frames `T`.
    pub fn len(&self) -> usize {
        self.frames.nrows()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: T >= 2
    }

    /// Feature dimension `D`.
    pub fn dim(&self) -> usize {
        self.frames.ncols()
    }

    pub fn frames(&self) -> &DMatrix<f64> {
        &self.frames
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    /// Frame `i` as a feature vector.
    pub fn frame(&self, i: usize) -> Vec<f64> {
        self.frames.row(i).iter().copied().collect()
    }

    /// Implicit timestamp of frame `i` in seconds.
    pub fn time_of(&self, i: usize) -> f64 {
        i as f64 / self.sample_rate_hz
    }

    // ---- CSV ----

    /// Parses the CSV trajectory format. `source` names the input in errors.
    pub fn from_csv_str(id: impl Into<String>, text: &str, source: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(source, 1, "empty file"))?;
        let cols: Vec<&str> = header.trim_end().split(',').collect();
        if cols.first().map(|c| c.trim()) != Some("t") {
            return Err(parse_err(source, 1, "header must start with column `t`"));
        }
        if cols.len() < 2 {
            return Err(parse_err(
                source,
                1,
                "header needs at least one feature column",
            ));
        }
        let dim = cols.len() - 1;
        let names: Vec<String> = cols[1..].iter().map(|c| c.trim().to_string()).collect();
        let canonical = names.iter().enumerate().all(|(k, n)| n == &format!("f{k}"));

        let mut times = Vec::new();
        let mut data: Vec<f64> = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.trim_end().split(',').collect();
            if fields.len() != dim + 1 {
                return Err(Error::Shape(format!(
                    "{source} line {lineno}: expected {} fields, got {}",
                    dim + 1,
                    fields.len()
                )));
            }
            let t: f64 = fields[0].trim().parse().map_err(|_| {
                parse_err(source, lineno, &format!("bad time value `{}`", fields[0]))
            })?;
            for field in &fields[1..] {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(source, lineno, &format!("bad value `{field}`")))?;
                data.push(v);
            }
            times.push((lineno, t));
        }
        Self::from_parsed(
            id,
            source,
            &times,
            data,
            dim,
            if canonical { None } else { Some(names) },
        )
    }

    /// Loads a CSV trajectory; the id defaults to the file stem.
    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "trajectory".into());
        Self::from_csv_str(id, &text, &path.display().to_string())
    }

    /// Serializes to the CSV format with 17 significant digits per value.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("t");
        match &self.feature_names {
            Some(names) => {
                for n in names {
                    out.push(',');
                    out.push_str(n);
                }
            }
            None => {
                for k in 0..self.dim() {
                    out.push_str(&format!(",f{k}"));
                }
            }
        }
        out.push('\n');
        for i in 0..self.len() {
            out.push_str(&format!("{:.16e}", self.time_of(i)));
            for j in 0..self.dim() {
                out.push_str(&format!(",{:.16e}", self.frames[(i, j)]));
            }
            out.push('\n');
        }
        out
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv_string()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    // ---- JSONL ----

    pub fn from_jsonl_str(id: impl Into<String>, text: &str, source: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct FrameLine {
            t: f64,
            features: Vec<f64>,
        }

        let mut times = Vec::new();
        let mut data = Vec::new();
        let mut dim = None;
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let frame: FrameLine = serde_json::from_str(line)
                .map_err(|e| parse_err(source, lineno, &e.to_string()))?;
            match dim {
                None => dim = Some(frame.features.len()),
                Some(d) if d != frame.features.len() => {
                    return Err(Error::Shape(format!(
                        "{source} line {lineno}: expected {d} features, got {}",
                        frame.features.len()
                    )))
                }
                _ => {}
            }
            data.extend_from_slice(&frame.features);
            times.push((lineno, frame.t));
        }
        let dim = dim.ok_or_else(|| parse_err(source, 1, "empty file"))?;
        if dim == 0 {
            return Err(Error::Shape(format!("{source}: frames have no features")));
        }
        Self::from_parsed(id, source, &times, data, dim, None)
    }

    pub fn load_jsonl(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "trajectory".into());
        Self::from_jsonl_str(id, &text, &path.display().to_string())
    }

    pub fn to_jsonl_string(&self) -> String {
        let mut out = String::new();
        for i in 0..self.len() {
            let features: Vec<f64> = self.frame(i);
            let obj = serde_json::json!({ "t": self.time_of(i), "features": features });
            out.push_str(&obj.to_string());
            out.push('\n');
        }
        out
    }

    pub fn save_jsonl(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_jsonl_string()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Shared tail of both loaders: ordering check, rate inference, build.
    fn from_parsed(
        id: impl Into<String>,
        source: &str,
        times: &[(usize, f64)],
        data: Vec<f64>,
        dim: usize,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::Shape(format!(
                "{source}: trajectory needs at least 2 frames, got {}",
                times.len()
            )));
        }
        for w in times.windows(2) {
            let (prev_line, prev_t) = w[0];
            let (line, t) = w[1];
            if t <= prev_t {
                return Err(Error::Ordering {
                    path: source.to_string(),
                    line,
                    message: format!("t={t} does not increase past t={prev_t} (line {prev_line})"),
                });
            }
        }
        let deltas: Vec<f64> = times.windows(2).map(|w| w[1].1 - w[0].1).collect();
        let mean = deltas.iter().sum::<f64>() / deltas.len() as f64;
        let var = deltas.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / deltas.len() as f64;
        let cv = var.sqrt() / mean;
        if cv > MAX_DELTA_T_CV {
            return Err(Error::IrregularSampling { cv });
        }
        let mut sorted = deltas.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = if sorted.len() % 2 == 1 {
            sorted[sorted.len() / 2]
        } else {
            0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
        };
        let t = times.len();
        let frames = DMatrix::from_fn(t, dim, |i, j| data[i * dim + j]);
        Self::new(id, 1.0 / median, frames, names)
    }
}

fn parse_err(source: &str, line: usize, message: &str) -> Error {
    Error::Parse {
        path: source.to_string(),
        line,
        message: message.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_three_frames_one_feature() {
        let text = "t,f0\n0.0,1.0\n0.1,2.0\n0.2,3.0\n";
        let tr = Trajectory::from_csv_str("m", text, "mem").unwrap();
        assert_eq!(tr.len(), 3);
        assert_eq!(tr.dim(), 1);
        assert_eq!(tr.sample_rate_hz(), 10.0);
        assert_eq!(tr.frame(1), vec![2.0]);
    }

    #[test]
    fn csv_jittered_time_is_rejected() {
        let text = "t,f0\n0.0,1.0\n0.13,2.0\n0.2,3.0\n0.31,4.0\n";
        let err = Trajectory::from_csv_str("m", text, "mem").unwrap_err();
        assert!(err.to_string().contains("irregular sampling"), "{err}");
    }

    #[test]
    fn jsonl_four_frames_fifteen_features() {
        let mut text = String::new();
        for i in 0..4 {
            let feats: Vec<f64> = (0..15).map(|k| (i * 15 + k) as f64).collect();
            text.push_str(&format!(
                "{}\n",
                serde_json::json!({"t": i as f64 * 0.1, "features": feats})
            ));
        }
        let tr = Trajectory::from_jsonl_str("m", &text, "mem").unwrap();
        assert_eq!(tr.len(), 4);
        assert_eq!(tr.dim(), 15);
    }

    #[test]
    fn csv_malformed_row_reports_line() {
        let text = "t,f0\n0.0,1.0\n0.1,oops\n";
        let err = Trajectory::from_csv_str("m", text, "mem").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn csv_non_monotone_time_is_ordering_error() {
        let text = "t,f0\n0.0,1.0\n0.2,2.0\n0.1,3.0\n";
        let err = Trajectory::from_csv_str("m", text, "mem").unwrap_err();
        assert!(matches!(err, Error::Ordering { line: 4, .. }), "{err}");
    }

    #[test]
    fn csv_dimension_mismatch_is_shape_error() {
        let text = "t,f0,f1\n0.0,1.0,2.0\n0.1,3.0\n";
        let err = Trajectory::from_csv_str("m", text, "mem").unwrap_err();
        assert!(matches!(err, Error::Shape(_)), "{err}");
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let rows = vec![
            vec![0.1 + 0.2, -1.5e-17, 3.0f64.sqrt()],
            vec![std::f64::consts::PI, 1.0 / 3.0, -0.0],
            vec![1e300, -2.2250738585072014e-308, 42.0],
        ];
        let tr = Trajectory::from_rows("rt", 10.0, &rows).unwrap();
        let back = Trajectory::from_csv_str("rt", &tr.to_csv_string(), "mem").unwrap();
        for i in 0..tr.len() {
            for j in 0..tr.dim() {
                assert_eq!(
                    tr.frames()[(i, j)].to_bits(),
                    back.frames()[(i, j)].to_bits(),
                    "frame ({i},{j}) changed"
                );
            }
        }
    }

    #[test]
    fn jsonl_round_trip_is_bit_exact() {
        let rows = vec![vec![0.1, 1.0 / 7.0], vec![-2.5e-13, 9.9], vec![0.3, 0.7]];
        let tr = Trajectory::from_rows("rt", 20.0, &rows).unwrap();
        let back = Trajectory::from_jsonl_str("rt", &tr.to_jsonl_string(), "mem").unwrap();
        assert_eq!(tr.frames(), back.frames());
    }

    #[test]
    fn rejects_single_frame_and_nan() {
        assert!(Trajectory::from_rows("x", 10.0, &[vec![1.0]]).is_err());
        assert!(Trajectory::from_rows("x", 10.0, &[vec![1.0], vec![f64::NAN]]).is_err());
    }
}
