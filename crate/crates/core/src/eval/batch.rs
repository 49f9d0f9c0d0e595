//! Batch scoring across a manifest of trajectory pairs.
//!
//! Scoring jobs fan out over a fixed-size worker pool; rows are sorted by
//! (pair id, measure) before aggregation, so the report does not depend on
//! completion order and reruns with any worker count are byte-identical.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::eval::report::{PairRecord, ScoreReport};
use crate::model::{resolve, Measure, MeasureConfig, MotionPairManifest, Trajectory};
use crate::preprocess::apply_chain;
use crate::score::score_pair;

#[derive(Debug, Clone)]
pub struct BatchOptions {
    pub workers: usize,
    /// Record wall-clock timings per row. Off by default because timings
    /// are not reproducible across runs.
    pub include_timings: bool,
}

impl Default for BatchOptions {
    fn default() -> Self {
        Self {
            workers: 1,
            include_timings: false,
        }
    }
}

struct Job {
    pair_id: String,
    group_label: String,
    measure: Measure,
    config: MeasureConfig,
    /// Preprocessed pair, or the error that broke preprocessing.
    pair: std::result::Result<(Trajectory, Trajectory), String>,
}

fn load_any(path: &Path) -> Result<Trajectory> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("jsonl") => Trajectory::load_jsonl(path),
        _ => Trajectory::load_csv(path),
    }
}

fn run_job(job: &Job, include_timings: bool) -> PairRecord {
    let started = Instant::now();
    let scored =
        job.pair.as_ref().map_err(|e| e.clone()).and_then(|(a, b)| {
            score_pair(a, b, job.measure, &job.config).map_err(|e| e.to_string())
        });
    let wall_time_ms = if include_timings {
        started.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };
    match scored {
        Ok(result) => PairRecord {
            pair_id: job.pair_id.clone(),
            group_label: job.group_label.clone(),
            measure: job.measure,
            discrepancy: Some(result.discrepancy),
            converged: result.converged,
            iterations: result.iterations,
            wall_time_ms,
            error: None,
        },
        Err(message) => PairRecord {
            pair_id: job.pair_id.clone(),
            group_label: job.group_label.clone(),
            measure: job.measure,
            discrepancy: None,
            converged: false,
            iterations: 0,
            wall_time_ms,
            error: Some(message),
        },
    }
}

/// Scores every (pair, measure) combination of the manifest after running
/// its preprocessing chain. Manifest-level I/O problems abort; per-pair
/// solver failures become annotated rows.
pub fn run_batch(
    manifest: &MotionPairManifest,
    base_dir: &Path,
    opts: &BatchOptions,
) -> Result<ScoreReport> {
    manifest.validate(base_dir)?;
    if opts.workers == 0 {
        return Err(Error::Parameter("workers must be at least 1".into()));
    }

    // Load and preprocess each pair once, keeping per-pair failures as row
    // annotations.
    let mut prepared = Vec::with_capacity(manifest.entries.len());
    for entry in &manifest.entries {
        let a = load_any(&resolve(base_dir, &entry.path_a))?;
        let b = load_any(&resolve(base_dir, &entry.path_b))?;
        let processed =
            apply_chain(&manifest.preprocessing, base_dir, a, b).map_err(|e| e.to_string());
        prepared.push(processed);
    }

    let mut jobs = Vec::new();
    for (entry, pair) in manifest.entries.iter().zip(&prepared) {
        for spec in &manifest.measures {
            jobs.push(Job {
                pair_id: entry.pair_id.clone(),
                group_label: entry.group_label.clone(),
                measure: spec.measure,
                config: spec.params.apply(MeasureConfig::default()),
                pair: pair.clone(),
            });
        }
    }

    let rows = if opts.workers <= 1 {
        jobs.iter()
            .map(|j| run_job(j, opts.include_timings))
            .collect()
    } else {
        let next = AtomicUsize::new(0);
        let rows = Mutex::new(vec![None; jobs.len()]);
        std::thread::scope(|scope| {
            for _ in 0..opts.workers.min(jobs.len()) {
                scope.spawn(|| loop {
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    if k >= jobs.len() {
                        break;
                    }
                    let record = run_job(&jobs[k], opts.include_timings);
                    rows.lock().expect("row sink")[k] = Some(record);
                });
            }
        });
        rows.into_inner()
            .expect("row sink")
            .into_iter()
            .map(|r| r.expect("every job produced a row"))
            .collect()
    };

    Ok(ScoreReport::from_rows(rows))
}
