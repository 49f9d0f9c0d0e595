//! Survey-result tables: per-(model, question) mean ratings.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SurveyRow {
    pub model: String,
    pub question: String,
    pub mean_rating: f64,
}

/// Mean subjective ratings keyed by model label and question id, loaded
/// from a CSV with header `model,question,mean_rating`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyTable {
    rows: Vec<SurveyRow>,
    questions: Vec<String>,
}

impl SurveyTable {
    pub fn new(rows: Vec<SurveyRow>) -> Result<Self> {
        let mut questions: Vec<String> = Vec::new();
        for (k, row) in rows.iter().enumerate() {
            if !(1.0..=5.0).contains(&row.mean_rating) {
                return Err(Error::Parse {
                    path: "survey".into(),
                    line: k + 2,
                    message: format!(
                        "mean_rating {} outside [1, 5] for ({}, {})",
                        row.mean_rating, row.model, row.question
                    ),
                });
            }
            if rows[..k]
                .iter()
                .any(|r| r.model == row.model && r.question == row.question)
            {
                return Err(Error::Parse {
                    path: "survey".into(),
                    line: k + 2,
                    message: format!("duplicate entry for ({}, {})", row.model, row.question),
                });
            }
            if !questions.contains(&row.question) {
                questions.push(row.question.clone());
            }
        }
        Ok(Self { rows, questions })
    }

    pub fn from_csv_str(text: &str, source: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Parse {
            path: source.into(),
            line: 1,
            message: "empty file".into(),
        })?;
        if header.trim() != "model,question,mean_rating" {
            return Err(Error::Parse {
                path: source.into(),
                line: 1,
                message: "header must be `model,question,mean_rating`".into(),
            });
        }
        let mut rows = Vec::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.trim_end().split(',').collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    path: source.into(),
                    line: idx + 1,
                    message: format!("expected 3 fields, got {}", fields.len()),
                });
            }
            let mean_rating: f64 = fields[2].trim().parse().map_err(|_| Error::Parse {
                path: source.into(),
                line: idx + 1,
                message: format!("bad rating `{}`", fields[2]),
            })?;
            rows.push(SurveyRow {
                model: fields[0].trim().to_string(),
                question: fields[1].trim().to_string(),
                mean_rating,
            });
        }
        Self::new(rows)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_csv_str(&text, &path.display().to_string())
    }

    pub fn rows(&self) -> &[SurveyRow] {
        &self.rows
    }

    /// Question ids in first-seen order.
    pub fn questions(&self) -> &[String] {
        &self.questions
    }

    /// Model labels in first-seen order.
    pub fn models(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.model) {
                out.push(r.model.clone());
            }
        }
        out
    }

    /// Mean rating of one model over a question subset. Every requested
    /// question must be present for the model.
    pub fn mean_over(&self, model: &str, questions: &[String]) -> Result<f64> {
        if questions.is_empty() {
            return Err(Error::Parameter("question subset is empty".into()));
        }
        let mut sum = 0.0;
        for q in questions {
            let row = self
                .rows
                .iter()
                .find(|r| r.model == model && &r.question == q)
                .ok_or_else(|| Error::Join(format!("survey has no entry for ({model}, {q})")))?;
            sum += row.mean_rating;
        }
        Ok(sum / questions.len() as f64)
    }
}
