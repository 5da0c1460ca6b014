//! Metrics engine for continual-learning experiments.
//!
//! Sequential-task training produces a lower-triangular accuracy matrix:
//! entry (k, j) is the accuracy on task j after training through task k. This
//! crate computes the traditional summaries of such matrices — Average
//! Accuracy (AA) and Average Forgetting (AF) — and their difficulty-rescaled
//! counterparts uRAA/uRAF and RAA/RAF, which divide out the performance any
//! model loses simply because the class set keeps growing, using the random
//! classifier as the difficulty yardstick.
//!
//! The crate also ships closed-form and Monte-Carlo models of that random
//! classifier, synthetic learners for generating matrices without training,
//! CSV/JSON log ingestion, and canonical report emission. Every rescaled
//! value is computed both definitionally and through the closed-form
//! difficulty coefficients; the two routes are cross-checked on every call.
//!
//! All types are immutable after construction and all computations are pure,
//! so everything here is safe to share across threads.

pub mod error;
pub mod io;
pub mod learners;
pub mod random_baseline;
pub mod report;
pub mod rescaled;
pub mod schedule;
pub mod series;
pub mod traditional;

pub use error::{Error, Result};
pub use learners::{Learner, LearnerSpec, LEARNER_KINDS};
pub use report::{build_report, MetricReport, ReportSource};
pub use rescaled::{difficulty_coefficients, DifficultyCoefficients, Normalizers};
pub use schedule::{AccuracyMatrix, TaskSchedule};
pub use series::{MetricName, MetricSeries};
