//! End-to-end tests of the command-line interface: exit codes, output
//! formats (pinned by golden files), and determinism across worker
//! counts.
//!
//! Regenerate the golden files with `UPDATE_GOLDEN=1 cargo test -p
//! motionsim --test cli` after an intentional format change.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_motionsim");

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("motionsim-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Deterministic ramp-family pair: generation avoids transcendentals, so
/// golden values are stable across platforms.
fn write_ramp_pair(dir: &Path) {
    let spec = serde_json::json!({
        "base": "piecewise_ramp",
        "d_a": 2, "d_b": 2, "t": 12,
        "transform": "none", "warp": "none",
        "noise_sigma": 0.0, "seed": 3
    });
    fs::write(dir.join("spec_a.json"), spec.to_string()).unwrap();
    let out = run(dir, &["synth", "--spec", "spec_a.json", "--out-dir", "pa"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let spec_b = serde_json::json!({
        "base": "piecewise_ramp",
        "d_a": 2, "d_b": 2, "t": 10,
        "transform": "none", "warp": "none",
        "noise_sigma": 0.0, "seed": 4
    });
    fs::write(dir.join("spec_b.json"), spec_b.to_string()).unwrap();
    let out = run(dir, &["synth", "--spec", "spec_b.json", "--out-dir", "pb"]);
    assert!(out.status.success(), "{}", stderr(&out));
}

fn check_golden(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var("UPDATE_GOLDEN").is_ok() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("golden file {name} missing; run with UPDATE_GOLDEN=1"));
    assert_eq!(actual, expected, "output drifted from golden file {name}");
}

#[test]
fn score_identity_prints_zero() {
    let dir = workdir("identity");
    write_ramp_pair(&dir);
    let out = run(
        &dir,
        &[
            "score",
            "--a",
            "pa/a.csv",
            "--b",
            "pa/a.csv",
            "--measure",
            "gdtw",
        ],
    );
    assert!(out.status.success());
    assert_eq!(stdout(&out), "0.000000e0\n");
}

#[test]
fn score_soft_dtw_defaults_gamma_and_echoes_it() {
    let dir = workdir("gamma");
    write_ramp_pair(&dir);
    let out = run(
        &dir,
        &[
            "score",
            "--a",
            "pa/a.csv",
            "--b",
            "pb/b.csv",
            "--measure",
            "soft_dtw",
            "--json",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed["params"]["gamma"], serde_json::json!(0.1));
    assert_eq!(parsed["measure"], serde_json::json!("soft_dtw"));
}

#[test]
fn unknown_measure_is_a_usage_error_listing_names() {
    let dir = workdir("badmeasure");
    write_ramp_pair(&dir);
    let out = run(
        &dir,
        &[
            "score",
            "--a",
            "pa/a.csv",
            "--b",
            "pb/b.csv",
            "--measure",
            "warp9",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    for name in [
        "dtw",
        "soft_dtw",
        "gdtw",
        "soft_gdtw",
        "dtw_gi",
        "soft_dtw_gi",
        "ctw",
    ] {
        assert!(err.contains(name), "usage error must list `{name}`: {err}");
    }
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let dir = workdir("badflag");
    let out = run(&dir, &["score", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn score_result_json_matches_golden() {
    let dir = workdir("golden-score");
    write_ramp_pair(&dir);
    let out = run(
        &dir,
        &[
            "score",
            "--a",
            "pa/a.csv",
            "--b",
            "pb/b.csv",
            "--measure",
            "dtw",
            "--json",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    check_golden("score_dtw.json", &stdout(&out));
}

#[test]
fn batch_report_matches_golden_and_is_worker_invariant() {
    let dir = workdir("batch");
    write_ramp_pair(&dir);
    let manifest = serde_json::json!({
        "entries": [
            {"pair_id": "p1", "path_a": "pa/a.csv", "path_b": "pa/b.csv", "group_label": "clean"},
            {"pair_id": "p2", "path_a": "pa/a.csv", "path_b": "pb/b.csv", "group_label": "mixed"}
        ],
        "measures": [
            {"measure": "dtw"},
            {"measure": "gdtw"},
            {"measure": "ctw", "params": {"max_outer_iters": 10}}
        ],
        "preprocessing": []
    });
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).unwrap(),
    )
    .unwrap();

    let out = run(
        &dir,
        &[
            "batch",
            "manifest.json",
            "--out",
            "r1.json",
            "--workers",
            "1",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("group"), "summary table printed");
    let out = run(
        &dir,
        &[
            "batch",
            "manifest.json",
            "--out",
            "r8.json",
            "--workers",
            "8",
        ],
    );
    assert!(out.status.success());

    let r1 = fs::read(dir.join("r1.json")).unwrap();
    let r8 = fs::read(dir.join("r8.json")).unwrap();
    assert_eq!(r1, r8, "reports differ across worker counts");
    check_golden("report.json", &String::from_utf8(r1).unwrap());
}

#[test]
fn batch_worker_env_var_is_honored_and_deterministic() {
    let dir = workdir("envworkers");
    write_ramp_pair(&dir);
    let manifest = serde_json::json!({
        "entries": [
            {"pair_id": "p1", "path_a": "pa/a.csv", "path_b": "pb/b.csv", "group_label": "g"}
        ],
        "measures": [{"measure": "gdtw"}, {"measure": "dtw"}]
    });
    fs::write(dir.join("manifest.json"), manifest.to_string()).unwrap();
    let out = run(
        &dir,
        &[
            "batch",
            "manifest.json",
            "--out",
            "direct.json",
            "--workers",
            "2",
        ],
    );
    assert!(out.status.success());
    let out = Command::new(BIN)
        .args(["batch", "manifest.json", "--out", "via_env.json"])
        .env("MOTIONSIM_WORKERS", "2")
        .current_dir(&dir)
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    assert_eq!(
        fs::read(dir.join("direct.json")).unwrap(),
        fs::read(dir.join("via_env.json")).unwrap()
    );
}

#[test]
fn batch_missing_file_names_it_and_exits_2() {
    let dir = workdir("missing");
    let manifest = serde_json::json!({
        "entries": [
            {"pair_id": "p1", "path_a": "nope.csv", "path_b": "alsono.csv", "group_label": "g"}
        ],
        "measures": [{"measure": "dtw"}]
    });
    fs::write(dir.join("manifest.json"), manifest.to_string()).unwrap();
    let out = run(&dir, &["batch", "manifest.json", "--out", "r.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("nope.csv"), "{}", stderr(&out));
}

#[test]
fn strict_score_exits_3_when_not_converged() {
    let dir = workdir("strict");
    let spec = serde_json::json!({
        "base": "sinusoid_mix",
        "d_a": 4, "d_b": 2, "t": 25,
        "transform": "nonlinear_mlp_like", "warp": "random_monotone",
        "noise_sigma": 0.3, "seed": 21
    });
    fs::write(dir.join("spec.json"), spec.to_string()).unwrap();
    let out = run(&dir, &["synth", "--spec", "spec.json", "--out-dir", "p"]);
    assert!(out.status.success());
    let out = run(
        &dir,
        &[
            "score",
            "--a",
            "p/a.csv",
            "--b",
            "p/b.csv",
            "--measure",
            "gdtw",
            "--max-iters",
            "1",
            "--strict",
        ],
    );
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
}

#[test]
fn rank_supports_question_subsets_and_fails_on_missing_models() {
    let dir = workdir("rank");
    let survey = "model,question,mean_rating\nA,Q1,4.0\nA,Q2,2.0\nB,Q1,3.0\nB,Q2,3.5\n";
    fs::write(dir.join("survey.csv"), survey).unwrap();
    let report = serde_json::json!({
        "schema_version": 1,
        "normalization": "raw",
        "per_pair": [
            {"pair_id": "p1", "group_label": "A", "measure": "gdtw", "discrepancy": 1.0,
             "converged": true, "iterations": 1, "wall_time_ms": 0.0},
            {"pair_id": "p2", "group_label": "B", "measure": "gdtw", "discrepancy": 2.0,
             "converged": true, "iterations": 1, "wall_time_ms": 0.0}
        ],
        "per_group": [
            {"group_label": "A", "measure": "gdtw", "mean_discrepancy": 1.0,
             "std_discrepancy": 0.0, "n": 1},
            {"group_label": "B", "measure": "gdtw", "mean_discrepancy": 2.0,
             "std_discrepancy": 0.0, "n": 1}
        ]
    });
    fs::write(dir.join("report.json"), report.to_string()).unwrap();

    // On Q1 alone, A (lower discrepancy) also rates higher: agreement.
    let out = run(
        &dir,
        &[
            "rank",
            "report.json",
            "--survey",
            "survey.csv",
            "--questions",
            "Q1",
            "--json",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed[0]["kendall_tau"], serde_json::json!(1.0));

    // On Q2 the survey prefers B: reversal.
    let out = run(
        &dir,
        &[
            "rank",
            "report.json",
            "--survey",
            "survey.csv",
            "--questions",
            "Q2",
            "--json",
        ],
    );
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(parsed[0]["kendall_tau"], serde_json::json!(-1.0));

    // Unknown model label in the report: join failure.
    let bad = report.to_string().replace("\"B\"", "\"Z\"");
    fs::write(dir.join("bad.json"), bad).unwrap();
    let out = run(&dir, &["rank", "bad.json", "--survey", "survey.csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn align_writes_aligned_csvs_and_path() {
    let dir = workdir("align");
    write_ramp_pair(&dir);
    let out = run(
        &dir,
        &[
            "align",
            "--human",
            "pa/a.csv",
            "--robot",
            "pb/b.csv",
            "--out-dir",
            "aligned",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    for f in ["aligned_human.csv", "aligned_robot.csv", "path.csv"] {
        assert!(dir.join("aligned").join(f).exists(), "{f} missing");
    }
    let path_csv = fs::read_to_string(dir.join("aligned/path.csv")).unwrap();
    assert!(path_csv.starts_with("i,j\n"), "path CSV header: {path_csv}");
    check_golden("path.csv", &path_csv);
}

#[test]
fn synth_writes_pair_and_ground_truth() {
    let dir = workdir("synth");
    let spec = serde_json::json!({
        "base": "lissajous",
        "d_a": 3, "d_b": 2, "t": 15,
        "transform": "rotation", "warp": "uniform",
        "noise_sigma": 0.0, "seed": 8
    });
    fs::write(dir.join("spec.json"), spec.to_string()).unwrap();
    let out = run(&dir, &["synth", "--spec", "spec.json", "--out-dir", "out"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let gt: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("out/ground_truth.json")).unwrap())
            .unwrap();
    assert!(gt["transform_matrix"].is_array());
    assert_eq!(gt["warp_map"].as_array().unwrap().len(), 30);
    // b is doubled in length by the uniform warp
    let b = fs::read_to_string(dir.join("out/b.csv")).unwrap();
    assert_eq!(b.lines().count(), 31);
}

#[test]
fn study_runs_from_config_and_writes_svg() {
    let dir = workdir("study");
    let config = serde_json::json!({
        "t": 16,
        "pairs_per_level": 3,
        "levels": [
            {"transform": "rotation", "warp": "none", "noise_sigma": 0.0},
            {"transform": "nonlinear_mlp_like", "warp": "none", "noise_sigma": 0.1},
            {"transform": "nonlinear_mlp_like", "warp": "none", "noise_sigma": 0.6}
        ],
        "measures": ["gdtw", "ctw"]
    });
    fs::write(dir.join("cfg.json"), config.to_string()).unwrap();
    let out = run(
        &dir,
        &[
            "study",
            "--config",
            "cfg.json",
            "--out",
            "summary.json",
            "--svg",
            "chart.svg",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("gdtw"));
    let svg = fs::read_to_string(dir.join("chart.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["groups"].as_array().unwrap().len(), 3);
}

#[test]
fn plot_renders_report_as_svg() {
    let dir = workdir("plot");
    write_ramp_pair(&dir);
    let manifest = serde_json::json!({
        "entries": [
            {"pair_id": "p1", "path_a": "pa/a.csv", "path_b": "pa/b.csv", "group_label": "g1"},
            {"pair_id": "p2", "path_a": "pa/a.csv", "path_b": "pb/b.csv", "group_label": "g2"}
        ],
        "measures": [{"measure": "dtw"}, {"measure": "gdtw"}]
    });
    fs::write(dir.join("manifest.json"), manifest.to_string()).unwrap();
    let out = run(&dir, &["batch", "manifest.json", "--out", "report.json"]);
    assert!(out.status.success());
    let out = run(
        &dir,
        &["plot", "report.json", "--svg", "chart.svg", "--normalize"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let svg = fs::read_to_string(dir.join("chart.svg")).unwrap();
    // one bar per (group, measure) plus two legend swatches
    assert_eq!(svg.matches("<rect").count(), 2 * 2 + 2);
}
