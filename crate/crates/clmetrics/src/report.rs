//! Bundled metric reports and their canonical JSON / CSV forms.
//!
//! A report carries every series the engine computes for one accuracy matrix,
//! the schedule it was computed over, provenance flags, and the matrix's
//! origin. Undefined entries serialize as JSON `null` / empty CSV cells,
//! never as 0. Serialization is canonical: fixed key and column order
//! (k, AA, AF, uRAA, uRAF, RAA, RAF, gamma, beta) and exact-round-trip float
//! formatting, so emit -> parse -> emit is byte-identical.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::learners::LearnerSpec;
use crate::rescaled::{
    difficulty_coefficients, rescaled_average_accuracy, rescaled_average_forgetting,
    unnormalized_rescaled_accuracy, unnormalized_rescaled_forgetting,
};
use crate::schedule::AccuracyMatrix;
use crate::series::MetricSeries;
use crate::traditional::{average_accuracy, average_forgetting};

/// Flag set when a single-task matrix leaves the whole forgetting family
/// undefined.
pub const FLAG_SINGLE_TASK: &str = "single-task: forgetting-family metrics are undefined";
/// Flag set when a non-uniform schedule routes RAF/beta through the numeric
/// normalizer instead of the closed form.
pub const FLAG_GENERAL_SCHEDULE: &str =
    "general-schedule: RAF and beta use the numeric normalizer (closed form requires uniform tasks)";

/// Where an accuracy matrix came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportSource {
    /// Generated in-process by a synthetic learner.
    Synthetic { learner: LearnerSpec },
    /// Ingested from a log file.
    File { path: String },
}

/// Echo of the schedule the metrics were computed over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEcho {
    pub num_tasks: usize,
    pub classes_per_task: Vec<u32>,
}

/// All series of one report, in canonical column order. Each vector has one
/// entry per task id; `None` is an explicitly-undefined value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesTable {
    #[serde(rename = "AA")]
    pub aa: Vec<Option<f64>>,
    #[serde(rename = "AF")]
    pub af: Vec<Option<f64>>,
    #[serde(rename = "uRAA")]
    pub uraa: Vec<Option<f64>>,
    #[serde(rename = "uRAF")]
    pub uraf: Vec<Option<f64>>,
    #[serde(rename = "RAA")]
    pub raa: Vec<Option<f64>>,
    #[serde(rename = "RAF")]
    pub raf: Vec<Option<f64>>,
    pub gamma: Vec<Option<f64>>,
    pub beta: Vec<Option<f64>>,
}

impl SeriesTable {
    /// Columns in emission order, paired with their labels.
    pub fn columns(&self) -> [(&'static str, &[Option<f64>]); 8] {
        [
            ("AA", &self.aa),
            ("AF", &self.af),
            ("uRAA", &self.uraa),
            ("uRAF", &self.uraf),
            ("RAA", &self.raa),
            ("RAF", &self.raf),
            ("gamma", &self.gamma),
            ("beta", &self.beta),
        ]
    }
}

/// Full metric report for one accuracy matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub schedule: ScheduleEcho,
    pub source: ReportSource,
    pub flags: Vec<String>,
    pub series: SeriesTable,
}

/// Compute every metric series for a matrix.
///
/// Single-task matrices produce all-undefined forgetting-family series and a
/// flag rather than an error; the rescaled dual-path checks still surface
/// implementation bugs as errors.
pub fn build_report(matrix: &AccuracyMatrix, source: ReportSource) -> Result<MetricReport> {
    let schedule = matrix.schedule();
    let num_tasks = schedule.num_tasks();
    let coefficients = difficulty_coefficients(schedule);

    let aa = average_accuracy(matrix);
    let af = average_forgetting(matrix);
    let uraa = unnormalized_rescaled_accuracy(matrix);
    let raa = rescaled_average_accuracy(matrix)?;
    let (uraf, raf) = if num_tasks >= 2 {
        (
            unnormalized_rescaled_forgetting(matrix)?,
            rescaled_average_forgetting(matrix)?,
        )
    } else {
        (
            MetricSeries::undefined(crate::series::MetricName::URaf, num_tasks),
            MetricSeries::undefined(crate::series::MetricName::Raf, num_tasks),
        )
    };

    let mut flags = Vec::new();
    if num_tasks < 2 {
        flags.push(FLAG_SINGLE_TASK.to_owned());
    }
    if coefficients.general_path {
        flags.push(FLAG_GENERAL_SCHEDULE.to_owned());
    }

    Ok(MetricReport {
        schedule: ScheduleEcho {
            num_tasks,
            classes_per_task: schedule.classes_per_task().to_vec(),
        },
        source,
        flags,
        series: SeriesTable {
            aa: aa.into_values(),
            af: af.into_values(),
            uraa: uraa.into_values(),
            uraf: uraf.into_values(),
            raa: raa.into_values(),
            raf: raf.into_values(),
            gamma: coefficients.gamma.into_values(),
            beta: coefficients.beta.into_values(),
        },
    })
}

/// Canonical JSON emission (pretty-printed, trailing newline).
pub fn report_to_json(report: &MetricReport) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serialization is total");
    out.push('\n');
    out
}

pub fn report_from_json(text: &str) -> Result<MetricReport> {
    Ok(serde_json::from_str(text)?)
}

fn csv_cell(value: Option<f64>) -> String {
    match value {
        // {:?} prints the shortest decimal that parses back to the same f64,
        // so no precision is lost.
        Some(v) => format!("{v:?}"),
        None => String::new(),
    }
}

/// CSV emission: one row per task id, one column per metric, empty cell for
/// undefined values.
pub fn report_to_csv(report: &MetricReport) -> String {
    let mut out = String::from("k,AA,AF,uRAA,uRAF,RAA,RAF,gamma,beta\n");
    for k in 1..=report.schedule.num_tasks {
        let mut row = vec![k.to_string()];
        for (_, column) in report.series.columns() {
            row.push(csv_cell(column[k - 1]));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Copy of the report with every defined value multiplied by 100, for
/// percent-style tables. The canonical unit stays fractions; this is an
/// output transform only.
pub fn report_in_percent(report: &MetricReport) -> MetricReport {
    let scale = |v: &[Option<f64>]| -> Vec<Option<f64>> {
        v.iter().map(|x| x.map(|x| x * 100.0)).collect()
    };
    let mut scaled = report.clone();
    scaled.series = SeriesTable {
        aa: scale(&report.series.aa),
        af: scale(&report.series.af),
        uraa: scale(&report.series.uraa),
        uraf: scale(&report.series.uraf),
        raa: scale(&report.series.raa),
        raf: scale(&report.series.raf),
        gamma: scale(&report.series.gamma),
        beta: scale(&report.series.beta),
    };
    scaled
}
