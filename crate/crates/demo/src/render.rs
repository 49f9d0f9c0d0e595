//! SVG rendering helpers for the browser demo.

use motionsim::model::{AlignmentPath, Trajectory};

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-9 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn polyline(points: &[(f64, f64)], color: &str, width: f64) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{x:.2},{y:.2}"))
        .collect();
    format!(
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{width}\" stroke-linejoin=\"round\"/>\n",
        coords.join(" ")
    )
}

/// Two 1-D signals stacked on a shared time axis.
pub fn signals_svg(a: &Trajectory, b: &Trajectory) -> String {
    let (w, h, pad) = (560.0, 180.0, 14.0);
    let (lo, hi) = bounds(a.frames().iter().chain(b.frames().iter()).copied());
    let y_of = |v: f64| pad + (hi - v) / (hi - lo) * (h - 2.0 * pad);
    let line_of = |t: &Trajectory, color: &str| {
        let n = t.len().max(2);
        let pts: Vec<(f64, f64)> = (0..t.len())
            .map(|i| {
                (
                    pad + i as f64 / (n - 1) as f64 * (w - 2.0 * pad),
                    y_of(t.frames()[(i, 0)]),
                )
            })
            .collect();
        polyline(&pts, color, 2.0)
    };
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    );
    svg.push_str(&line_of(a, "#4c78a8"));
    svg.push_str(&line_of(b, "#f58518"));
    svg.push_str("</svg>\n");
    svg
}

/// Two 2-D curves overlaid in the plane, start markers included.
pub fn curves_svg(a: &Trajectory, b: &Trajectory) -> String {
    let (w, h, pad) = (360.0, 360.0, 18.0);
    let (x_lo, x_hi) = bounds(
        (0..a.len())
            .map(|i| a.frames()[(i, 0)])
            .chain((0..b.len()).map(|i| b.frames()[(i, 0)])),
    );
    let (y_lo, y_hi) = bounds(
        (0..a.len())
            .map(|i| a.frames()[(i, 1)])
            .chain((0..b.len()).map(|i| b.frames()[(i, 1)])),
    );
    let scale = ((w - 2.0 * pad) / (x_hi - x_lo)).min((h - 2.0 * pad) / (y_hi - y_lo));
    let point = |x: f64, y: f64| (pad + (x - x_lo) * scale, h - pad - (y - y_lo) * scale);
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    );
    for (t, color) in [(a, "#4c78a8"), (b, "#f58518")] {
        let pts: Vec<(f64, f64)> = (0..t.len())
            .map(|i| point(t.frames()[(i, 0)], t.frames()[(i, 1)]))
            .collect();
        svg.push_str(&polyline(&pts, color, 2.0));
        if let Some(&(x, y)) = pts.first() {
            svg.push_str(&format!(
                "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"{color}\"/>\n"
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

/// Soft-alignment expectation as a heatmap with the greedy hard path
/// overlaid.
pub fn alignment_heatmap_svg(
    expectation_rows: usize,
    expectation_cols: usize,
    weight: impl Fn(usize, usize) -> f64,
    path: &AlignmentPath,
) -> String {
    let cell = (420.0 / expectation_cols.max(expectation_rows) as f64).min(16.0);
    let (w, h) = (
        expectation_cols as f64 * cell + 2.0,
        expectation_rows as f64 * cell + 2.0,
    );
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">\n"
    );
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{w:.0}\" height=\"{h:.0}\" fill=\"#f4f4f4\"/>\n"
    ));
    for i in 0..expectation_rows {
        for j in 0..expectation_cols {
            let v = weight(i, j).clamp(0.0, 1.0);
            if v < 0.004 {
                continue;
            }
            svg.push_str(&format!(
                "  <rect x=\"{:.2}\" y=\"{:.2}\" width=\"{cell:.2}\" height=\"{cell:.2}\" fill=\"#4c78a8\" fill-opacity=\"{v:.3}\"/>\n",
                1.0 + j as f64 * cell,
                1.0 + i as f64 * cell
            ));
        }
    }
    let pts: Vec<(f64, f64)> = path
        .pairs()
        .iter()
        .map(|&(i, j)| (1.0 + (j as f64 + 0.5) * cell, 1.0 + (i as f64 + 0.5) * cell))
        .collect();
    svg.push_str(&polyline(&pts, "#e45756", 2.0));
    svg.push_str("</svg>\n");
    svg
}
