//! Matrix-file parsing and writing.
//!
//! Two formats carry accuracy matrices:
//!
//! - CSV: a header line `# tasks=<K> classes=<n>` (or a comma list with one
//!   count per task) followed by K rows, row k holding k comma-separated
//!   accuracies.
//! - JSON: an object with a `classes_per_task` array and a ragged `rows`
//!   array, plus an optional `learner` field recording the synthetic spec
//!   that generated the matrix.
//!
//! Percent-mode ingestion divides every entry by 100. For CSV this is done by
//! shifting the decimal point in the token itself, so `50` in percent mode
//! parses to exactly the same float as `0.50` in fraction mode.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::LearnerSpec;
use crate::schedule::{AccuracyMatrix, TaskSchedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Json,
}

impl MatrixFormat {
    /// Pick a format from a file extension; anything but `.json` reads as CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => MatrixFormat::Json,
            _ => MatrixFormat::Csv,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixFileJson {
    classes_per_task: Vec<u32>,
    rows: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    learner: Option<LearnerSpec>,
}

/// Shift the decimal point of a plain decimal literal two places left —
/// exact division by 100 performed in decimal, before float rounding.
/// Returns `None` for anything that is not a bare unsigned decimal.
fn shift_decimal_left2(token: &str) -> Option<String> {
    let (int_part, frac_part) = match token.split_once('.') {
        Some((i, f)) => (i, f),
        None => (token, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    Some(if int_part.len() > 2 {
        let (head, tail) = int_part.split_at(int_part.len() - 2);
        format!("{head}.{tail}{frac_part}")
    } else {
        format!(
            "0.{}{}{}",
            "0".repeat(2 - int_part.len()),
            int_part,
            frac_part
        )
    })
}

fn parse_accuracy_token(token: &str, percent: bool) -> Option<f64> {
    let token = token.trim();
    if !percent {
        return token.parse().ok();
    }
    match shift_decimal_left2(token) {
        Some(shifted) => shifted.parse().ok(),
        None => token.parse::<f64>().ok().map(|v| v / 100.0),
    }
}

fn parse_csv_header(line: &str, line_no: usize) -> Result<TaskSchedule> {
    let bad = |message: String| Error::Parse {
        line: line_no,
        message,
    };
    let rest = line
        .strip_prefix("# tasks=")
        .ok_or_else(|| bad("expected header '# tasks=<K> classes=<n>[,<n>...]'".into()))?;
    let (tasks_str, classes_str) = rest
        .split_once(" classes=")
        .ok_or_else(|| bad("header is missing ' classes='".into()))?;
    let num_tasks: usize = tasks_str
        .parse()
        .map_err(|_| bad(format!("invalid task count '{tasks_str}'")))?;
    let counts = classes_str
        .split(',')
        .map(|tok| {
            tok.parse::<u32>()
                .map_err(|_| bad(format!("invalid class count '{tok}'")))
        })
        .collect::<Result<Vec<u32>>>()?;
    let schedule = if counts.len() == 1 {
        TaskSchedule::uniform(num_tasks, counts[0])
    } else {
        TaskSchedule::new(num_tasks, &counts)
    };
    schedule.map_err(|e| bad(e.to_string()))
}

fn parse_csv_matrix(text: &str, percent: bool) -> Result<(AccuracyMatrix, Option<LearnerSpec>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (header_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty input".into(),
    })?;
    // trim_end tolerates CRLF logs without loosening the header grammar
    let schedule = parse_csv_header(header.trim_end(), header_no)?;
    let mut rows = Vec::with_capacity(schedule.num_tasks());
    for (line_no, line) in lines {
        let row_no = rows.len() + 1;
        let row = line
            .split(',')
            .enumerate()
            .map(|(c, tok)| {
                parse_accuracy_token(tok, percent).ok_or(Error::Parse {
                    line: line_no,
                    message: format!(
                        "row {row_no}, column {}: invalid number '{}'",
                        c + 1,
                        tok.trim()
                    ),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok((AccuracyMatrix::new(schedule, rows)?, None))
}

fn parse_json_matrix(text: &str, percent: bool) -> Result<(AccuracyMatrix, Option<LearnerSpec>)> {
    let file: MatrixFileJson = serde_json::from_str(text)?;
    let schedule = TaskSchedule::from_counts(file.classes_per_task)?;
    let rows = if percent {
        file.rows
            .into_iter()
            .map(|row| row.into_iter().map(|v| v / 100.0).collect())
            .collect()
    } else {
        file.rows
    };
    Ok((AccuracyMatrix::new(schedule, rows)?, file.learner))
}

/// Parse a matrix from text. Returns the matrix and, for JSON files that
/// carry one, the synthetic learner spec that generated it.
pub fn parse_matrix_str(
    text: &str,
    format: MatrixFormat,
    percent: bool,
) -> Result<(AccuracyMatrix, Option<LearnerSpec>)> {
    match format {
        MatrixFormat::Csv => parse_csv_matrix(text, percent),
        MatrixFormat::Json => parse_json_matrix(text, percent),
    }
}

pub fn parse_matrix_file(
    path: &Path,
    format: MatrixFormat,
    percent: bool,
) -> Result<(AccuracyMatrix, Option<LearnerSpec>)> {
    parse_matrix_str(&fs::read_to_string(path)?, format, percent)
}

/// Write a matrix in the headered CSV format, fractions at full precision.
pub fn matrix_to_csv(matrix: &AccuracyMatrix) -> String {
    let schedule = matrix.schedule();
    let classes = if schedule.is_uniform() {
        schedule.classes_per_task()[0].to_string()
    } else {
        schedule
            .classes_per_task()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = format!("# tasks={} classes={}\n", schedule.num_tasks(), classes);
    for row in matrix.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Write a matrix in the JSON format, optionally embedding the generating
/// learner spec so downstream reports keep the synthetic provenance.
pub fn matrix_to_json(matrix: &AccuracyMatrix, learner: Option<&LearnerSpec>) -> String {
    let file = MatrixFileJson {
        classes_per_task: matrix.schedule().classes_per_task().to_vec(),
        rows: matrix.rows().map(<[f64]>::to_vec).collect(),
        learner: learner.cloned(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("matrix serialization is total");
    out.push('\n');
    out
}
