//! Rank agreement between measure scores and survey ratings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::report::ScoreReport;
use crate::model::{Measure, SurveyTable};

/// Agreement of one measure's group ordering with the survey ordering.
/// `ordering_quant` sorts ascending by mean discrepancy (best first);
/// `ordering_survey` sorts descending by survey mean (best first).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankAgreement {
    pub measure: Measure,
    pub ordering_quant: Vec<String>,
    pub ordering_survey: Vec<String>,
    pub kendall_tau: f64,
    pub spearman_rho: f64,
}

/// Kendall tau-b: concordant minus discordant pairs with tie correction.
/// Returns 0 when either side is entirely tied.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "tau needs paired samples");
    let n = x.len();
    let (mut concordant, mut discordant) = (0f64, 0f64);
    let (mut tied_x, mut tied_y) = (0f64, 0f64);
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = x[i] - x[j];
            let dy = y[i] - y[j];
            if dx == 0.0 && dy == 0.0 {
                tied_x += 1.0;
                tied_y += 1.0;
            } else if dx == 0.0 {
                tied_x += 1.0;
            } else if dy == 0.0 {
                tied_y += 1.0;
            } else if dx * dy > 0.0 {
                concordant += 1.0;
            } else {
                discordant += 1.0;
            }
        }
    }
    let n0 = (n * (n - 1)) as f64 / 2.0;
    let denom = ((n0 - tied_x) * (n0 - tied_y)).sqrt();
    if denom == 0.0 {
        return 0.0;
    }
    ((concordant - discordant) / denom).clamp(-1.0, 1.0)
}

/// Average ranks with ties sharing their mean rank.
fn ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut out = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            out[idx] = rank;
        }
        i = j + 1;
    }
    out
}

/// Spearman rho: Pearson correlation of the rank vectors. Returns 0 when
/// either rank vector has no variance.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "rho needs paired samples");
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for k in 0..x.len() {
        let dx = rx[k] - mx;
        let dy = ry[k] - my;
        cov += dx * dy;
        vx += dx * dx;
        vy += dy * dy;
    }
    if vx == 0.0 || vy == 0.0 {
        return 0.0;
    }
    (cov / (vx * vy).sqrt()).clamp(-1.0, 1.0)
}

/// Compares each measure's group ordering (lower discrepancy is better)
/// with the survey ordering (higher mean rating is better) over the shared
/// label set. `questions` defaults to every question in the table.
pub fn rank_agreement(
    report: &ScoreReport,
    survey: &SurveyTable,
    questions: Option<&[String]>,
) -> Result<Vec<RankAgreement>> {
    let labels = report.group_labels();
    if labels.len() < 2 {
        return Err(Error::Parameter(
            "rank agreement needs at least 2 groups".into(),
        ));
    }
    let all_questions = survey.questions().to_vec();
    let questions = questions.unwrap_or(&all_questions);
    let survey_models = survey.models();
    for label in &labels {
        if !survey_models.contains(label) {
            return Err(Error::Join(format!(
                "report group `{label}` missing from survey models {survey_models:?}"
            )));
        }
    }

    let survey_scores: Vec<f64> = labels
        .iter()
        .map(|label| survey.mean_over(label, questions))
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    for measure in report.measures() {
        let mut discrepancies = Vec::with_capacity(labels.len());
        for label in &labels {
            let mean = report.group_mean(label, measure).ok_or_else(|| {
                Error::Join(format!("group `{label}` has no `{measure}` aggregate"))
            })?;
            discrepancies.push(mean);
        }
        // Lower discrepancy = better, so negate the quantitative side.
        let goodness: Vec<f64> = discrepancies.iter().map(|d| -d).collect();
        let kendall_tau = kendall_tau_b(&goodness, &survey_scores);
        let spearman_rho = spearman_rho(&goodness, &survey_scores);

        let ordering_quant = sorted_labels(&labels, &discrepancies, false);
        let ordering_survey = sorted_labels(&labels, &survey_scores, true);
        out.push(RankAgreement {
            measure,
            ordering_quant,
            ordering_survey,
            kendall_tau,
            spearman_rho,
        });
    }
    Ok(out)
}

/// Labels sorted by score (descending when `desc`); ties break by label so
/// the ordering is deterministic.
fn sorted_labels(labels: &[String], scores: &[f64], desc: bool) -> Vec<String> {
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| {
        let cmp = scores[a].partial_cmp(&scores[b]).unwrap();
        let cmp = if desc { cmp.reverse() } else { cmp };
        cmp.then_with(|| labels[a].cmp(&labels[b]))
    });
    order.into_iter().map(|i| labels[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::report::PairRecord;

    /// Plain concordant/discordant counting without tie handling, as an
    /// independent oracle for tie-free inputs.
    fn naive_tau(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len();
        let mut c = 0.0;
        let mut d = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                if (x[i] - x[j]) * (y[i] - y[j]) > 0.0 {
                    c += 1.0;
                } else {
                    d += 1.0;
                }
            }
        }
        (c - d) / (n * (n - 1)) as f64 * 2.0
    }

    #[test]
    fn perfect_and_reversed_agreement() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [10.0, 20.0, 30.0, 40.0, 50.0];
        assert_eq!(kendall_tau_b(&x, &y), 1.0);
        assert_eq!(spearman_rho(&x, &y), 1.0);
        let rev: Vec<f64> = y.iter().rev().copied().collect();
        assert_eq!(kendall_tau_b(&x, &rev), -1.0);
        assert_eq!(spearman_rho(&x, &rev), -1.0);
    }

    #[test]
    fn adjacent_swap_over_four_labels_gives_two_thirds() {
        // One discordant pair out of six.
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [1.0, 3.0, 2.0, 4.0];
        let tau = kendall_tau_b(&x, &y);
        assert!((tau - 2.0 / 3.0).abs() < 1e-15);
        assert!((tau - naive_tau(&x, &y)).abs() < 1e-15);
    }

    #[test]
    fn tau_matches_naive_counting_on_random_permutations() {
        let mut state = 123u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let x: Vec<f64> = (0..6).map(|_| next()).collect();
            let y: Vec<f64> = (0..6).map(|_| next()).collect();
            assert!((kendall_tau_b(&x, &y) - naive_tau(&x, &y)).abs() < 1e-12);
        }
    }

    #[test]
    fn antisymmetric_under_reversal() {
        let x = [3.0, 1.0, 4.0, 1.5, 5.0];
        let y = [2.0, 7.0, 1.0, 8.0, 2.5];
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        assert_eq!(kendall_tau_b(&x, &y), -kendall_tau_b(&x, &neg));
    }

    #[test]
    fn all_tied_side_returns_zero() {
        let x = [1.0, 1.0, 1.0];
        let y = [1.0, 2.0, 3.0];
        assert_eq!(kendall_tau_b(&x, &y), 0.0);
        assert_eq!(spearman_rho(&x, &y), 0.0);
    }

    fn report_from(groups: &[(&str, f64)]) -> ScoreReport {
        let rows: Vec<PairRecord> = groups
            .iter()
            .enumerate()
            .map(|(k, (label, d))| PairRecord {
                pair_id: format!("p{k}"),
                group_label: label.to_string(),
                measure: Measure::Gdtw,
                discrepancy: Some(*d),
                converged: true,
                iterations: 1,
                wall_time_ms: 0.0,
                error: None,
            })
            .collect();
        ScoreReport::from_rows(rows)
    }

    fn table_iv_survey() -> SurveyTable {
        // Average-column ratings; one synthetic question id.
        let csv = "model,question,mean_rating\n\
                   Dancer,avg,3.63\nIBC-1,avg,2.46\nIBC-2,avg,2.44\nMLP-1,avg,2.77\nMLP-2,avg,2.92\n";
        SurveyTable::from_csv_str(csv, "mem").unwrap()
    }

    #[test]
    fn survey_ordering_matches_published_averages() {
        let survey = table_iv_survey();
        // Report whose ordering agrees with the survey (lower = better).
        let report = report_from(&[
            ("Dancer", 0.1),
            ("MLP-2", 0.2),
            ("MLP-1", 0.3),
            ("IBC-1", 0.4),
            ("IBC-2", 0.5),
        ]);
        let out = rank_agreement(&report, &survey, None).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(
            out[0].ordering_survey,
            vec!["Dancer", "MLP-2", "MLP-1", "IBC-1", "IBC-2"]
        );
        assert_eq!(out[0].ordering_quant, out[0].ordering_survey);
        assert_eq!(out[0].kendall_tau, 1.0);
        assert_eq!(out[0].spearman_rho, 1.0);
    }

    #[test]
    fn missing_model_is_a_join_error() {
        let survey = table_iv_survey();
        let report = report_from(&[("Dancer", 0.1), ("Unknown", 0.2)]);
        assert!(matches!(
            rank_agreement(&report, &survey, None),
            Err(Error::Join(_))
        ));
    }
}
