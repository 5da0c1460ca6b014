//! Error type shared across the crate.

/// Errors from schedule construction, matrix validation, file parsing and the
/// rescaled-metric consistency checks.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error("row {row}: expected {expected} entries, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("entry ({row},{col}) = {value} is outside [0,1]")]
    EntryOutOfRange { row: usize, col: usize, value: f64 },

    #[error("matrix has {rows} rows but the schedule has {tasks} tasks")]
    DimensionMismatch { rows: usize, tasks: usize },

    #[error("forgetting is undefined for a single-task sequence")]
    SingleTask,

    #[error("invalid learner: {0}")]
    Learner(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The definitional and closed-form computations of a rescaled metric
    /// disagreed beyond tolerance. This indicates a bug, never bad input.
    #[error(
        "{metric} paths disagree at k={k}: definitional {definitional} vs closed-form {closed_form}"
    )]
    PathMismatch {
        metric: &'static str,
        k: usize,
        definitional: f64,
        closed_form: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
