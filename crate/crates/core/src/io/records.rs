//! CSV interchange for probability vectors, score records, and per-sample
//! score tables.
//!
//! All files are UTF-8 with `\n` line endings and `.` as the decimal
//! separator. Floats are printed with Rust's shortest round-trip formatting,
//! so write→read reproduces every double bit-exactly.

use crate::error::{Error, Result};
use crate::scoring::ProbVector;
use serde::Serialize;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// Membership of a sample: drawn from the training distribution or not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    In,
    Out,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::In => "in",
            Label::Out => "out",
        })
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "in" => Ok(Label::In),
            "out" => Ok(Label::Out),
            other => Err(Error::InvalidInput(format!(
                "label must be 'in' or 'out', got '{other}'"
            ))),
        }
    }
}

/// One scored sample: the unit of evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRecord {
    pub id: Option<String>,
    pub label: Label,
    pub score: f64,
}

impl ScoreRecord {
    pub fn new(id: Option<String>, label: Label, score: f64) -> Result<Self> {
        if !score.is_finite() {
            return Err(Error::InvalidInput(format!("score {score} is not finite")));
        }
        Ok(Self { id, label, score })
    }
}

/// Relative slack allowed on the probability sum before a row is rejected;
/// rows within it are renormalized (external frameworks print truncated
/// floats).
pub const PROB_SUM_TOL: f64 = 1e-6;

/// Read `label,p0,p1,...,p{K-1}` rows. Row numbers in errors are 1-based
/// over data rows.
pub fn read_prob_csv(path: impl AsRef<Path>) -> Result<Vec<(Label, ProbVector)>> {
    let text = std::fs::read_to_string(path)?;
    parse_prob_csv(&text)
}

pub(crate) fn parse_prob_csv(text: &str) -> Result<Vec<(Label, ProbVector)>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::CsvParse {
        row: 0,
        message: "empty file".to_string(),
    })?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.first() != Some(&"label") || cols.len() < 3 {
        return Err(Error::CsvParse {
            row: 0,
            message: format!("expected header 'label,p0,p1,...', got '{header}'"),
        });
    }
    let k = cols.len() - 1;
    for (i, c) in cols.iter().skip(1).enumerate() {
        if *c != format!("p{i}") {
            return Err(Error::CsvParse {
                row: 0,
                message: format!("expected column p{i}, got '{c}'"),
            });
        }
    }

    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let row = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != k + 1 {
            return Err(Error::CsvParse {
                row,
                message: format!("expected {} fields, got {}", k + 1, fields.len()),
            });
        }
        let label: Label = fields[0].parse().map_err(|e| Error::CsvParse {
            row,
            message: format!("{e}"),
        })?;
        let mut probs = Vec::with_capacity(k);
        for f in &fields[1..] {
            let v: f64 = f.trim().parse().map_err(|_| Error::CsvParse {
                row,
                message: format!("non-numeric probability '{f}'"),
            })?;
            if !v.is_finite() || v < 0.0 {
                return Err(Error::CsvParse {
                    row,
                    message: format!("probability {v} outside [0, 1]"),
                });
            }
            probs.push(v);
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::CsvParse {
                row,
                message: format!("probabilities sum to {sum}"),
            });
        }
        for p in probs.iter_mut() {
            *p /= sum;
        }
        let vector = ProbVector::new(probs).map_err(|e| Error::CsvParse {
            row,
            message: e.to_string(),
        })?;
        rows.push((label, vector));
    }
    Ok(rows)
}

/// Write `id,label,score` rows. Missing ids become empty fields.
pub fn write_records_csv(records: &[ScoreRecord], path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::from("id,label,score\n");
    for r in records {
        let id = r.id.as_deref().unwrap_or("");
        out.push_str(&format!("{},{},{}\n", id, r.label, r.score));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Read `id,label,score` rows back.
pub fn read_records_csv(path: impl AsRef<Path>) -> Result<Vec<ScoreRecord>> {
    let text = std::fs::read_to_string(path)?;
    parse_records_csv(&text)
}

pub(crate) fn parse_records_csv(text: &str) -> Result<Vec<ScoreRecord>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::CsvParse {
        row: 0,
        message: "empty file".to_string(),
    })?;
    if header != "id,label,score" {
        return Err(Error::CsvParse {
            row: 0,
            message: format!("expected header 'id,label,score', got '{header}'"),
        });
    }
    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        let row = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::CsvParse {
                row,
                message: format!("expected 3 fields, got {}", fields.len()),
            });
        }
        let id = if fields[0].is_empty() {
            None
        } else {
            Some(fields[0].to_string())
        };
        let label: Label = fields[1].parse().map_err(|e| Error::CsvParse {
            row,
            message: format!("{e}"),
        })?;
        let score: f64 = fields[2].trim().parse().map_err(|_| Error::CsvParse {
            row,
            message: format!("non-numeric score '{}'", fields[2]),
        })?;
        records.push(
            ScoreRecord::new(id, label, score).map_err(|e| Error::CsvParse {
                row,
                message: e.to_string(),
            })?,
        );
    }
    Ok(records)
}

/// One row of the per-sample score table emitted by the scoring command.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTableRow {
    pub id: String,
    pub label: Label,
    pub anomaly: f64,
    pub remaining: f64,
    pub msp: f64,
}

pub fn write_score_table(rows: &[ScoreTableRow], path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::from("id,label,anomaly,remaining,msp\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.id, r.label, r.anomaly, r.remaining, r.msp
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_score_table(path: impl AsRef<Path>) -> Result<Vec<ScoreTableRow>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::CsvParse {
        row: 0,
        message: "empty file".to_string(),
    })?;
    if header != "id,label,anomaly,remaining,msp" {
        return Err(Error::CsvParse {
            row: 0,
            message: format!("expected header 'id,label,anomaly,remaining,msp', got '{header}'"),
        });
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let row = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::CsvParse {
                row,
                message: format!("expected 5 fields, got {}", fields.len()),
            });
        }
        let label: Label = fields[1].parse().map_err(|e| Error::CsvParse {
            row,
            message: format!("{e}"),
        })?;
        let num = |s: &str| -> Result<f64> {
            s.trim().parse().map_err(|_| Error::CsvParse {
                row,
                message: format!("non-numeric field '{s}'"),
            })
        };
        rows.push(ScoreTableRow {
            id: fields[0].to_string(),
            label,
            anomaly: num(fields[2])?,
            remaining: num(fields[3])?,
            msp: num(fields[4])?,
        });
    }
    Ok(rows)
}
