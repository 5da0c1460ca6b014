//! Task sequences and the lower-triangular accuracy matrices recorded over
//! them.
//!
//! A schedule lists how many new classes each task introduces; the cumulative
//! counts C_k drive every baseline and coefficient in the crate. Matrices are
//! stored as fractions in [0, 1] — percent conversion happens at ingestion,
//! never here.

use crate::error::{Error, Result};

/// A sequence of K classification tasks, each introducing `classes_per_task`
/// new (disjoint) classes.
///
/// Immutable after construction; cumulative class counts are precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskSchedule {
    classes_per_task: Vec<u32>,
    cumulative: Vec<u64>,
}

impl TaskSchedule {
    /// Build a schedule from an explicit per-task class count list. The list
    /// length must equal `num_tasks`.
    pub fn new(num_tasks: usize, classes_per_task: &[u32]) -> Result<Self> {
        if classes_per_task.len() != num_tasks {
            return Err(Error::Schedule(format!(
                "expected {num_tasks} class counts, found {}",
                classes_per_task.len()
            )));
        }
        Self::from_counts(classes_per_task.to_vec())
    }

    /// The common uniform case: every task introduces the same number of
    /// classes (a single scalar broadcast to all tasks).
    pub fn uniform(num_tasks: usize, classes_per_task: u32) -> Result<Self> {
        if num_tasks == 0 {
            return Err(Error::Schedule("a schedule needs at least one task".into()));
        }
        Self::from_counts(vec![classes_per_task; num_tasks])
    }

    /// Build from the class-count list alone; the number of tasks is its
    /// length.
    pub fn from_counts(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Schedule("a schedule needs at least one task".into()));
        }
        if let Some(i) = counts.iter().position(|&c| c == 0) {
            return Err(Error::Schedule(format!(
                "task {} introduces zero classes; every task needs at least one",
                i + 1
            )));
        }
        let mut cumulative = Vec::with_capacity(counts.len());
        let mut total = 0u64;
        for &c in &counts {
            total += u64::from(c);
            cumulative.push(total);
        }
        Ok(Self {
            classes_per_task: counts,
            cumulative,
        })
    }

    /// Number of tasks K.
    pub fn num_tasks(&self) -> usize {
        self.classes_per_task.len()
    }

    pub fn classes_per_task(&self) -> &[u32] {
        &self.classes_per_task
    }

    /// Cumulative class count C_k after task `k` (1-based).
    pub fn cumulative_classes(&self, k: usize) -> u64 {
        assert!(
            k >= 1 && k <= self.cumulative.len(),
            "task id {k} out of range 1..={}",
            self.cumulative.len()
        );
        self.cumulative[k - 1]
    }

    /// Total class count C_K.
    pub fn total_classes(&self) -> u64 {
        *self.cumulative.last().expect("schedule is never empty")
    }

    /// True when every task introduces the same number of classes (the
    /// precondition of the closed-form forgetting coefficient).
    pub fn is_uniform(&self) -> bool {
        self.classes_per_task
            .iter()
            .all(|&c| c == self.classes_per_task[0])
    }
}

/// Lower-triangular record of accuracies: entry (k, j) is the accuracy on
/// task j's test set measured after training on task k, as a fraction in
/// [0, 1]. Defined only for j <= k.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyMatrix {
    schedule: TaskSchedule,
    // Row-major lower triangle: row k holds k entries.
    entries: Vec<f64>,
}

fn tri_index(k: usize, j: usize) -> usize {
    k * (k - 1) / 2 + (j - 1)
}

impl AccuracyMatrix {
    /// Validate and store a ragged row list: row k must hold exactly k
    /// entries, all in [0, 1].
    pub fn new(schedule: TaskSchedule, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != schedule.num_tasks() {
            return Err(Error::DimensionMismatch {
                rows: rows.len(),
                tasks: schedule.num_tasks(),
            });
        }
        let mut entries = Vec::with_capacity(rows.len() * (rows.len() + 1) / 2);
        for (i, row) in rows.iter().enumerate() {
            let k = i + 1;
            if row.len() != k {
                return Err(Error::RaggedRow {
                    row: k,
                    expected: k,
                    found: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::EntryOutOfRange {
                        row: k,
                        col: c + 1,
                        value: v,
                    });
                }
                entries.push(v);
            }
        }
        Ok(Self { schedule, entries })
    }

    /// Fill the triangle from a generator. The generator must stay in [0, 1];
    /// a violation is a caller bug and panics.
    pub(crate) fn from_fn(
        schedule: TaskSchedule,
        mut cell: impl FnMut(usize, usize) -> f64,
    ) -> Self {
        let num_tasks = schedule.num_tasks();
        let mut entries = Vec::with_capacity(num_tasks * (num_tasks + 1) / 2);
        for k in 1..=num_tasks {
            for j in 1..=k {
                let v = cell(k, j);
                assert!(
                    (0.0..=1.0).contains(&v),
                    "generated entry ({k},{j}) = {v} outside [0,1]"
                );
                entries.push(v);
            }
        }
        Self { schedule, entries }
    }

    pub fn schedule(&self) -> &TaskSchedule {
        &self.schedule
    }

    pub fn num_tasks(&self) -> usize {
        self.schedule.num_tasks()
    }

    /// Accuracy a(k, j), 1-based. Panics when j > k — the upper triangle does
    /// not exist.
    pub fn a(&self, k: usize, j: usize) -> f64 {
        assert!(
            k >= 1 && k <= self.num_tasks(),
            "task id {k} out of range 1..={}",
            self.num_tasks()
        );
        assert!(
            j >= 1 && j <= k,
            "entry ({k},{j}) is above the diagonal; accuracies exist only for j <= k"
        );
        self.entries[tri_index(k, j)]
    }

    /// Row k: accuracies on tasks 1..=k after training on task k.
    pub fn row(&self, k: usize) -> &[f64] {
        assert!(
            k >= 1 && k <= self.num_tasks(),
            "task id {k} out of range 1..={}",
            self.num_tasks()
        );
        &self.entries[tri_index(k, 1)..tri_index(k, 1) + k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (1..=self.num_tasks()).map(|k| self.row(k))
    }
}
