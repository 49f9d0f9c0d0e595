//! Hand-rolled SVG bar chart: one cluster per group, one bar per measure,
//! error bars showing one standard deviation.

/// One bar series (a measure) across all groups.
#[derive(Debug, Clone)]
pub struct BarSeries {
    pub name: String,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

const PALETTE: [&str; 7] = [
    "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#b279a2", "#eeca3b",
];

/// Renders a grouped bar chart. `groups` labels the clusters on the x
/// axis; every series must carry one mean and one std per group.
pub fn bar_chart(title: &str, y_label: &str, groups: &[String], series: &[BarSeries]) -> String {
    assert!(
        series
            .iter()
            .all(|s| s.means.len() == groups.len() && s.stds.len() == groups.len()),
        "series length must match group count"
    );
    let bar_w = 18.0;
    let bar_gap = 4.0;
    let cluster_gap = 26.0;
    let cluster_w = series.len() as f64 * (bar_w + bar_gap) + cluster_gap;
    let margin_left = 64.0;
    let margin_top = 40.0;
    let plot_h = 240.0;
    let width = margin_left + groups.len() as f64 * cluster_w + 150.0;
    let height = margin_top + plot_h + 60.0;

    let top = series
        .iter()
        .flat_map(|s| s.means.iter().zip(&s.stds).map(|(m, sd)| m + sd))
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let y_max = top * 1.08;
    let y_of = |v: f64| margin_top + plot_h - (v / y_max) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{:.1}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" font-weight=\"bold\">{}</text>\n",
        margin_left, escape(title)
    ));
    svg.push_str(&format!(
        "  <text x=\"14\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" transform=\"rotate(-90 14 {:.1})\">{}</text>\n",
        margin_top + plot_h / 2.0,
        margin_top + plot_h / 2.0,
        escape(y_label)
    ));

    // Axes and y ticks.
    svg.push_str(&format!(
        "  <line x1=\"{margin_left:.1}\" y1=\"{:.1}\" x2=\"{margin_left:.1}\" y2=\"{:.1}\" stroke=\"#333\"/>\n",
        margin_top, margin_top + plot_h
    ));
    svg.push_str(&format!(
        "  <line x1=\"{margin_left:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"#333\"/>\n",
        margin_top + plot_h,
        margin_left + groups.len() as f64 * cluster_w,
        margin_top + plot_h
    ));
    for k in 0..=4 {
        let v = y_max * k as f64 / 4.0;
        let y = y_of(v);
        svg.push_str(&format!(
            "  <line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{margin_left:.1}\" y2=\"{y:.1}\" stroke=\"#333\"/>\n",
            margin_left - 4.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">{v:.3}</text>\n",
            margin_left - 7.0,
            y + 3.0
        ));
    }

    for (gi, group) in groups.iter().enumerate() {
        let cluster_x = margin_left + gi as f64 * cluster_w + cluster_gap / 2.0;
        for (si, s) in series.iter().enumerate() {
            let x = cluster_x + si as f64 * (bar_w + bar_gap);
            let mean = s.means[gi];
            let std = s.stds[gi];
            let y = y_of(mean);
            let color = PALETTE[si % PALETTE.len()];
            svg.push_str(&format!(
                "  <rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{bar_w:.1}\" height=\"{:.1}\" fill=\"{color}\"/>\n",
                (margin_top + plot_h - y).max(0.0)
            ));
            if std > 0.0 {
                let cx = x + bar_w / 2.0;
                let (y_hi, y_lo) = (y_of(mean + std), y_of((mean - std).max(0.0)));
                svg.push_str(&format!(
                    "  <line x1=\"{cx:.1}\" y1=\"{y_hi:.1}\" x2=\"{cx:.1}\" y2=\"{y_lo:.1}\" stroke=\"#111\" stroke-width=\"1.2\"/>\n"
                ));
                for ye in [y_hi, y_lo] {
                    svg.push_str(&format!(
                        "  <line x1=\"{:.1}\" y1=\"{ye:.1}\" x2=\"{:.1}\" y2=\"{ye:.1}\" stroke=\"#111\" stroke-width=\"1.2\"/>\n",
                        cx - 4.0,
                        cx + 4.0
                    ));
                }
            }
        }
        let label_x = cluster_x + (series.len() as f64 * (bar_w + bar_gap)) / 2.0;
        svg.push_str(&format!(
            "  <text x=\"{label_x:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            margin_top + plot_h + 16.0,
            escape(group)
        ));
    }

    // Legend.
    let legend_x = margin_left + groups.len() as f64 * cluster_w + 12.0;
    for (si, s) in series.iter().enumerate() {
        let y = margin_top + si as f64 * 18.0;
        svg.push_str(&format!(
            "  <rect x=\"{legend_x:.1}\" y=\"{y:.1}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n",
            PALETTE[si % PALETTE.len()]
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"11\">{}</text>\n",
            legend_x + 16.0,
            y + 10.0,
            escape(&s.name)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
