//! Interactive browser demo of the trajectory-similarity measures.
//!
//! Three operations are exported to JavaScript, each returning a JSON
//! string with embedded SVG fragments:
//!
//! * [`alignment_demo`]: soft-DTW expected alignment between a signal
//!   and a warped noisy copy, with the extracted hard path;
//! * [`isometry_demo`]: all seven measures on a curve and its rotated,
//!   translated, noisy copy;
//! * [`study_demo`]: a miniature degradation study with its bar chart.

mod render;

use wasm_bindgen::prelude::*;

use motionsim::eval::{
    degradation_study, generate_pair, BaseFamily, SynthSpec, TransformKind, WarpKind,
};
use motionsim::model::{Measure, MeasureConfig, Trajectory};
use motionsim::score::score_pair;

fn err_json(message: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": message.to_string() }).to_string()
}

fn config_with_gamma(gamma: f64) -> MeasureConfig {
    MeasureConfig {
        gamma,
        ..MeasureConfig::default()
    }
}

/// Soft alignment between a 1-D signal and its warped, noisy copy.
/// Returns `{signals_svg, heatmap_svg, dtw, soft_dtw, path_len, t_a, t_b}`.
#[wasm_bindgen]
pub fn alignment_demo(t: usize, warp: &str, noise: f64, gamma: f64, seed: u32) -> String {
    let warp = match warp {
        "none" => WarpKind::None,
        "uniform" => WarpKind::Uniform,
        "random_monotone" => WarpKind::RandomMonotone,
        other => return err_json(format!("unknown warp `{other}`")),
    };
    let spec = SynthSpec {
        base: BaseFamily::SinusoidMix,
        d_a: 1,
        d_b: 1,
        t,
        transform: TransformKind::None,
        warp,
        noise_sigma: noise,
        seed: seed as u64,
    };
    let (a, b, _) = match generate_pair(&spec) {
        Ok(p) => p,
        Err(e) => return err_json(e),
    };
    let cfg = config_with_gamma(gamma);
    let cost = match motionsim::align::pairwise_cost(&a, &b, cfg.metric) {
        Ok(c) => c,
        Err(e) => return err_json(e),
    };
    let hard = motionsim::align::dtw(&cost);
    let soft_value = match motionsim::align::soft_dtw(&cost, gamma) {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    let sa = match motionsim::align::soft_alignment(&cost, gamma) {
        Ok(sa) => sa,
        Err(e) => return err_json(e),
    };
    let greedy = motionsim::align::hard_path_from_soft(&sa);
    let e = sa.expectation();
    let heatmap = render::alignment_heatmap_svg(e.nrows(), e.ncols(), |i, j| e[(i, j)], &greedy);

    serde_json::json!({
        "signals_svg": render::signals_svg(&a, &b),
        "heatmap_svg": heatmap,
        "dtw": hard.discrepancy,
        "soft_dtw": soft_value,
        "path_len": greedy.len(),
        "t_a": a.len(),
        "t_b": b.len(),
    })
    .to_string()
}

/// Scores a 2-D curve against its rotated, translated, noisy copy with
/// every measure. Returns `{curves_svg, scores: [{measure, value,
/// converged}]}`.
#[wasm_bindgen]
pub fn isometry_demo(
    t: usize,
    angle_deg: f64,
    tx: f64,
    ty: f64,
    noise: f64,
    gamma: f64,
    seed: u32,
) -> String {
    let spec = SynthSpec {
        base: BaseFamily::Lissajous,
        d_a: 2,
        d_b: 2,
        t,
        transform: TransformKind::None,
        warp: WarpKind::None,
        noise_sigma: 0.0,
        seed: seed as u64,
    };
    let (a, _, _) = match generate_pair(&spec) {
        Ok(p) => p,
        Err(e) => return err_json(e),
    };
    // Rotate, translate, and perturb the copy with a small deterministic
    // hash-noise so the slider is reproducible.
    let angle = angle_deg.to_radians();
    let (s, c) = angle.sin_cos();
    let jitter = |i: usize, j: usize| {
        let mut z =
            (seed as u64) ^ ((i as u64) << 32) ^ (j as u64).wrapping_mul(0x9e3779b97f4a7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        ((z >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 2.0
    };
    let rows: Vec<Vec<f64>> = (0..a.len())
        .map(|i| {
            let f = a.frame(i);
            vec![
                c * f[0] - s * f[1] + tx + noise * jitter(i, 0),
                s * f[0] + c * f[1] + ty + noise * jitter(i, 1),
            ]
        })
        .collect();
    let b = match Trajectory::from_rows("moved", a.sample_rate_hz(), &rows) {
        Ok(b) => b,
        Err(e) => return err_json(e),
    };

    let cfg = config_with_gamma(gamma);
    let scores: Vec<serde_json::Value> = Measure::ALL
        .iter()
        .map(|&measure| match score_pair(&a, &b, measure, &cfg) {
            Ok(result) => serde_json::json!({
                "measure": measure.name(),
                "value": result.discrepancy,
                "converged": result.converged,
            }),
            Err(e) => serde_json::json!({
                "measure": measure.name(),
                "error": e.to_string(),
            }),
        })
        .collect();

    serde_json::json!({
        "curves_svg": render::curves_svg(&a, &b),
        "scores": scores,
    })
    .to_string()
}

/// Miniature degradation study (clean isometric level plus three
/// increasingly corrupted nonlinear levels). Returns `{chart_svg, taus:
/// [{measure, tau}]}`.
#[wasm_bindgen]
pub fn study_demo(t: usize, pairs_per_level: usize, seed: u32) -> String {
    let cfg = motionsim::eval::StudyConfig {
        t,
        pairs_per_level,
        base_seed: seed as u64,
        measures: vec![Measure::Gdtw, Measure::SoftGdtw, Measure::Ctw],
        ..motionsim::eval::StudyConfig::default()
    };
    let summary = match degradation_study(&cfg.levels(), &cfg.measures, &cfg.config) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    let taus: Vec<serde_json::Value> = summary
        .per_measure
        .iter()
        .map(|m| {
            serde_json::json!({
                "measure": m.measure.name(),
                "tau": m.kendall_tau,
            })
        })
        .collect();
    serde_json::json!({
        "chart_svg": summary.to_svg(),
        "taus": taus,
    })
    .to_string()
}
