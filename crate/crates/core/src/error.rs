use thiserror::Error;

pub type Result<T, E = GmeError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum GmeError {
    #[error("qubit {qubit}: pair norm {norm:e} is at or below the degeneracy threshold")]
    DegeneratePair { qubit: usize, norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid qubit count {n}: {reason}")]
    InvalidQubitCount { n: usize, reason: &'static str },

    #[error("{what} = {value} is out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("{n} qubits exceeds the limit of {limit} for {what}")]
    TooLarge {
        n: usize,
        limit: usize,
        what: &'static str,
    },

    #[error("empty input")]
    EmptyInput,

    #[error("repetition aborted: degenerate pair persisted after {retries} perturbation redraws")]
    DegenerateRun { retries: usize },

    #[error("invalid {field}: {message}")]
    Format { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl GmeError {
    pub(crate) fn format(field: impl Into<String>, message: impl Into<String>) -> Self {
        GmeError::Format {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by bad user input rather than a runtime failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            GmeError::Format { .. }
                | GmeError::Json(_)
                | GmeError::DimensionMismatch { .. }
                | GmeError::InvalidQubitCount { .. }
                | GmeError::OutOfRange { .. }
                | GmeError::ZeroNorm
                | GmeError::TooLarge { .. }
        )
    }
}
