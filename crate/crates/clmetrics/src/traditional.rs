//! The traditional continual-learning metrics: average accuracy and average
//! forgetting.
//!
//! AA_k is the mean of accuracy-matrix row k. The forgetting entry f(k, j)
//! compares the best accuracy ever reached on task j (over l in {j, .., k-1})
//! with the current one; AF_k is the mean of f(k, j) over j < k and is
//! undefined at k = 1. Negative forgetting (backward transfer) is reported
//! as-is, never clamped.

use crate::error::{Error, Result};
use crate::schedule::AccuracyMatrix;
use crate::series::{MetricName, MetricSeries};

/// Strictly lower-triangular forgetting entries: f(k, j) for 1 <= j < k <= K.
#[derive(Debug, Clone, PartialEq)]
pub struct ForgettingMatrix {
    num_tasks: usize,
    // Row-major strict lower triangle: row k (k >= 2) holds k - 1 entries.
    entries: Vec<f64>,
}

fn strict_tri_index(k: usize, j: usize) -> usize {
    (k - 1) * (k - 2) / 2 + (j - 1)
}

impl ForgettingMatrix {
    pub fn num_tasks(&self) -> usize {
        self.num_tasks
    }

    /// Forgetting f(k, j), 1-based, defined only for j < k.
    pub fn f(&self, k: usize, j: usize) -> f64 {
        assert!(
            k >= 2 && k <= self.num_tasks,
            "task id {k} out of range 2..={}",
            self.num_tasks
        );
        assert!(
            j >= 1 && j < k,
            "forgetting ({k},{j}) undefined; it exists only for j < k"
        );
        self.entries[strict_tri_index(k, j)]
    }

    /// Row k: forgetting on tasks 1..k after training on task k (k >= 2).
    pub fn row(&self, k: usize) -> &[f64] {
        assert!(
            k >= 2 && k <= self.num_tasks,
            "task id {k} out of range 2..={}",
            self.num_tasks
        );
        &self.entries[strict_tri_index(k, 1)..strict_tri_index(k, 1) + (k - 1)]
    }
}

/// AA_k = (1/k) * sum_{j<=k} a(k, j), defined for every k.
pub fn average_accuracy(matrix: &AccuracyMatrix) -> MetricSeries {
    let values = matrix
        .rows()
        .map(|row| Some(row.iter().sum::<f64>() / row.len() as f64))
        .collect();
    MetricSeries::new(MetricName::Aa, values)
}

/// All forgetting entries f(k, j) = max_{l in {j..k-1}} a(l, j) - a(k, j).
///
/// A single-task matrix has no history to forget, which is an error here
/// rather than an empty result.
pub fn forgetting_entries(matrix: &AccuracyMatrix) -> Result<ForgettingMatrix> {
    let num_tasks = matrix.num_tasks();
    if num_tasks < 2 {
        return Err(Error::SingleTask);
    }
    let mut entries = vec![0.0; num_tasks * (num_tasks - 1) / 2];
    // Column-wise running max over the history l in {j, .., k-1}.
    for j in 1..=num_tasks - 1 {
        let mut best = matrix.a(j, j);
        for k in j + 1..=num_tasks {
            entries[strict_tri_index(k, j)] = best - matrix.a(k, j);
            best = best.max(matrix.a(k, j));
        }
    }
    Ok(ForgettingMatrix { num_tasks, entries })
}

/// AF_k = (1/(k-1)) * sum_{j<k} f(k, j) for k >= 2; undefined at k = 1.
///
/// A single-task matrix yields an all-undefined series (the report layer
/// flags it) instead of an error, so K = 1 logs still produce a report.
pub fn average_forgetting(matrix: &AccuracyMatrix) -> MetricSeries {
    let num_tasks = matrix.num_tasks();
    let mut values = vec![None; num_tasks];
    if let Ok(f) = forgetting_entries(matrix) {
        for (k, slot) in values.iter_mut().enumerate().skip(1) {
            let k = k + 1;
            *slot = Some(f.row(k).iter().sum::<f64>() / (k - 1) as f64);
        }
    }
    MetricSeries::new(MetricName::Af, values)
}
