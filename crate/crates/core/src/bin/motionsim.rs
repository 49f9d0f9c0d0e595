//! Command-line front end: single-pair scoring, pair alignment, batch
//! evaluation, rank agreement, synthetic data, degradation studies, and
//! SVG charts.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 solver
//! non-convergence under `--strict`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use motionsim::error::Error;
use motionsim::eval::svg::{bar_chart, BarSeries};
use motionsim::eval::{
    rank_agreement, run_batch, BatchOptions, NormalizationMode, ScoreReport, StudyConfig, SynthSpec,
};
use motionsim::model::{Measure, MeasureConfig, MotionPairManifest, SurveyTable, Trajectory};
use motionsim::preprocess::{align_pair, align_pair_weighted};
use motionsim::score::score_pair;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "motionsim",
    about = "Similarity scoring for heterogeneous motion trajectories",
    version
)]
struct Cli {
    /// Print the resolved solver parameters before running.
    #[arg(long, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SolverFlags {
    /// Smoothing for the soft variants.
    #[arg(long)]
    gamma: Option<f64>,
    /// Outer-iteration budget for the alternating solvers.
    #[arg(long = "max-iters")]
    max_iters: Option<usize>,
    /// Relative objective-change convergence threshold.
    #[arg(long)]
    tol: Option<f64>,
    /// Ground metric: sq_euclidean or euclidean.
    #[arg(long)]
    metric: Option<String>,
    /// Sakoe-Chiba band radius in cells.
    #[arg(long)]
    band: Option<usize>,
    /// Solver initialization: diagonal_path or uniform.
    #[arg(long)]
    init: Option<String>,
}

impl SolverFlags {
    fn to_config(&self) -> Result<MeasureConfig, Error> {
        let mut cfg = MeasureConfig::default();
        if let Some(g) = self.gamma {
            cfg.gamma = g;
        }
        if let Some(n) = self.max_iters {
            cfg.max_outer_iters = n;
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        if let Some(m) = &self.metric {
            cfg.metric = m.parse()?;
        }
        if let Some(b) = self.band {
            cfg.band = Some(b);
        }
        if let Some(i) = &self.init {
            cfg.init = match i.as_str() {
                "diagonal_path" => motionsim::model::InitStrategy::DiagonalPath,
                "uniform" => motionsim::model::InitStrategy::Uniform,
                other => {
                    return Err(Error::Parameter(format!(
                        "unknown init `{other}`; valid: diagonal_path, uniform"
                    )))
                }
            };
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Score one trajectory pair with one measure.
    Score {
        /// First trajectory (CSV or JSONL).
        #[arg(long)]
        a: PathBuf,
        /// Second trajectory (CSV or JSONL).
        #[arg(long)]
        b: PathBuf,
        /// dtw, soft_dtw, gdtw, soft_gdtw, dtw_gi, soft_dtw_gi, or ctw.
        #[arg(long)]
        measure: String,
        #[command(flatten)]
        solver: SolverFlags,
        /// Print the full result as JSON.
        #[arg(long)]
        json: bool,
        /// Exit with code 3 when the solver did not converge.
        #[arg(long)]
        strict: bool,
    },
    /// Score every pair/measure combination of a manifest.
    Batch {
        manifest: PathBuf,
        /// Report output path.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: MOTIONSIM_WORKERS or 1).
        #[arg(long)]
        workers: Option<usize>,
        /// Record wall-clock timings (breaks byte-identical reruns).
        #[arg(long)]
        timings: bool,
        /// Exit with code 3 when any row did not converge.
        #[arg(long)]
        strict: bool,
    },
    /// Rank agreement between a report and survey ratings.
    Rank {
        report: PathBuf,
        /// Survey CSV (`model,question,mean_rating`).
        #[arg(long)]
        survey: PathBuf,
        /// Comma-separated question subset, e.g. Q1,Q2.
        #[arg(long)]
        questions: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Time-align a trajectory pair and write the aligned files.
    Align {
        #[arg(long)]
        human: PathBuf,
        #[arg(long)]
        robot: PathBuf,
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = motionsim::model::DEFAULT_GAMMA)]
        gamma: f64,
        /// Weight of the raw-feature cost term (default: 1 when the
        /// dimensions match, otherwise 0).
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Generate a synthetic trajectory pair with ground truth.
    Synth {
        /// SynthSpec JSON document.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
    },
    /// Run the synthetic degradation study.
    Study {
        /// StudyConfig JSON; omit for the built-in default sweep.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Also render the summary as an SVG bar chart.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Render a report as an SVG bar chart (group clusters, measure bars).
    Plot {
        report: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        /// Min-max normalize group means per measure before plotting.
        #[arg(long)]
        normalize: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful exits.
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DATA)
        }
    }
}

fn load_any(path: &Path) -> Result<Trajectory, Error> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("jsonl") => Trajectory::load_jsonl(path),
        _ => Trajectory::load_csv(path),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Score {
            a,
            b,
            measure,
            solver,
            json,
            strict,
        } => {
            let measure: Measure = match measure.parse() {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(EXIT_USAGE));
                }
            };
            let cfg = match solver.to_config() {
                Ok(cfg) => cfg,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(ExitCode::from(EXIT_USAGE));
                }
            };
            if cli.verbose {
                eprintln!(
                    "params: {}",
                    serde_json::to_string(&cfg.to_params(measure)).expect("params serialize")
                );
            }
            let ta = load_any(&a)?;
            let tb = load_any(&b)?;
            let result = score_pair(&ta, &tb, measure, &cfg)?;
            if json {
                println!("{}", result.to_json_string());
            } else {
                println!("{:.6e}", result.discrepancy);
            }
            if strict && !result.converged {
                eprintln!(
                    "solver did not converge after {} iterations",
                    result.iterations
                );
                return Ok(ExitCode::from(EXIT_NOT_CONVERGED));
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Batch {
            manifest,
            out,
            workers,
            timings,
            strict,
        } => {
            let workers = workers
                .or_else(|| {
                    std::env::var("MOTIONSIM_WORKERS")
                        .ok()
                        .and_then(|v| v.parse().ok())
                })
                .unwrap_or(1);
            let (manifest, base_dir) = MotionPairManifest::load(&manifest)?;
            if cli.verbose {
                eprintln!(
                    "batch: {} pairs x {} measures, {workers} workers",
                    manifest.entries.len(),
                    manifest.measures.len()
                );
            }
            let report = run_batch(
                &manifest,
                &base_dir,
                &BatchOptions {
                    workers,
                    include_timings: timings,
                },
            )?;
            report.save(&out)?;
            print_summary_table(&report);
            let diverged = report.per_pair.iter().filter(|r| !r.converged).count();
            if diverged > 0 {
                eprintln!("{diverged} row(s) did not converge");
                if strict {
                    return Ok(ExitCode::from(EXIT_NOT_CONVERGED));
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Rank {
            report,
            survey,
            questions,
            json,
        } => {
            let report = ScoreReport::load(&report)?;
            let survey = SurveyTable::load_csv(&survey)?;
            let subset: Option<Vec<String>> =
                questions.map(|q| q.split(',').map(|s| s.trim().to_string()).collect());
            if cli.verbose {
                eprintln!(
                    "rank: {} groups x {} questions",
                    report.group_labels().len(),
                    subset
                        .as_ref()
                        .map(|s| s.len())
                        .unwrap_or(survey.questions().len())
                );
            }
            let agreements = rank_agreement(&report, &survey, subset.as_deref())?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&agreements).expect("agreements serialize")
                );
            } else {
                for ra in &agreements {
                    println!(
                        "{:<12} tau={:+.4} rho={:+.4}",
                        ra.measure.to_string(),
                        ra.kendall_tau,
                        ra.spearman_rho
                    );
                    println!(
                        "  measure ordering (best first): {}",
                        ra.ordering_quant.join(" > ")
                    );
                    println!(
                        "  survey ordering  (best first): {}",
                        ra.ordering_survey.join(" > ")
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Align {
            human,
            robot,
            out_dir,
            gamma,
            lambda,
        } => {
            let h = load_any(&human)?;
            let r = load_any(&robot)?;
            if cli.verbose {
                eprintln!(
                    "align: gamma={gamma}, lambda={}",
                    lambda
                        .map(|l| l.to_string())
                        .unwrap_or_else(|| "auto".into())
                );
            }
            let (h_out, r_out, path) = match lambda {
                Some(l) => align_pair_weighted(&h, &r, gamma, l)?,
                None => align_pair(&h, &r, gamma)?,
            };
            std::fs::create_dir_all(&out_dir).map_err(|source| Error::Io {
                path: out_dir.clone(),
                source,
            })?;
            h_out.save_csv(out_dir.join("aligned_human.csv"))?;
            r_out.save_csv(out_dir.join("aligned_robot.csv"))?;
            write_file(&out_dir.join("path.csv"), &path.to_csv_string())?;
            println!(
                "aligned {} ({} frames) and {} ({} -> {} frames); path length {}",
                h.id(),
                h.len(),
                r.id(),
                r.len(),
                r_out.len(),
                path.len()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Synth { spec, out_dir } => {
            let text = std::fs::read_to_string(&spec).map_err(|source| Error::Io {
                path: spec.clone(),
                source,
            })?;
            let spec: SynthSpec = serde_json::from_str(&text)
                .map_err(|e| Error::Manifest(format!("bad spec: {e}")))?;
            if cli.verbose {
                eprintln!(
                    "synth: {}",
                    serde_json::to_string(&spec).expect("spec serializes")
                );
            }
            let (a, b, ground_truth) = motionsim::eval::generate_pair(&spec)?;
            std::fs::create_dir_all(&out_dir).map_err(|source| Error::Io {
                path: out_dir.clone(),
                source,
            })?;
            a.save_csv(out_dir.join("a.csv"))?;
            b.save_csv(out_dir.join("b.csv"))?;
            let mut gt =
                serde_json::to_string_pretty(&ground_truth).expect("ground truth serializes");
            gt.push('\n');
            write_file(&out_dir.join("ground_truth.json"), &gt)?;
            println!(
                "wrote a.csv ({}x{}), b.csv ({}x{}), ground_truth.json",
                a.len(),
                a.dim(),
                b.len(),
                b.dim()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Study { config, out, svg } => {
            let cfg = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|source| Error::Io {
                        path: path.clone(),
                        source,
                    })?;
                    serde_json::from_str(&text)
                        .map_err(|e| Error::Manifest(format!("bad study config: {e}")))?
                }
                None => StudyConfig::default(),
            };
            if cli.verbose {
                eprintln!(
                    "study: {} levels x {} pairs, measures {:?}",
                    cfg.levels.len(),
                    cfg.pairs_per_level,
                    cfg.measures.iter().map(|m| m.name()).collect::<Vec<_>>()
                );
            }
            let summary = cfg.run()?;
            write_file(&out, &summary.to_json_string())?;
            if let Some(svg_path) = svg {
                write_file(&svg_path, &summary.to_svg())?;
            }
            for m in &summary.per_measure {
                println!("{:<12} tau={:+.4}", m.measure.to_string(), m.kendall_tau);
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Plot {
            report,
            svg,
            normalize,
        } => {
            let report = ScoreReport::load(&report)?;
            let report = if normalize {
                report.normalized(NormalizationMode::MinmaxPerMeasure)?
            } else {
                report
            };
            let groups = report.group_labels();
            let series: Vec<BarSeries> = report
                .measures()
                .into_iter()
                .map(|measure| {
                    let (means, stds) = groups
                        .iter()
                        .map(|label| {
                            report
                                .per_group
                                .iter()
                                .find(|g| &g.group_label == label && g.measure == measure)
                                .map(|g| (g.mean_discrepancy, g.std_discrepancy))
                                .unwrap_or((0.0, 0.0))
                        })
                        .unzip();
                    BarSeries {
                        name: measure.to_string(),
                        means,
                        stds,
                    }
                })
                .collect();
            let y_label = if normalize {
                "normalized mean discrepancy"
            } else {
                "mean discrepancy"
            };
            write_file(
                &svg,
                &bar_chart("Batch scores by group", y_label, &groups, &series),
            )?;
            println!("wrote {}", svg.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_summary_table(report: &ScoreReport) {
    let groups = report.group_labels();
    let measures = report.measures();
    print!("{:<16}", "group");
    for m in &measures {
        print!("{:>14}", m.to_string());
    }
    println!();
    for label in &groups {
        print!("{label:<16}");
        for m in &measures {
            match report.group_mean(label, *m) {
                Some(mean) => print!("{mean:>14.6}"),
                None => print!("{:>14}", "-"),
            }
        }
        println!();
    }
}
