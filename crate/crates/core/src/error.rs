use thiserror::Error;

/// Errors raised by the reduction library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial must have at least one coefficient")]
    EmptyPolynomial,

    #[error("interval half-width must be strictly positive")]
    NonPositiveHalfWidth,

    #[error("target degree {target} must be below the nominal degree {degree}")]
    TargetDegreeTooHigh { target: usize, degree: usize },

    #[error("target degree {target} exceeds source degree {source_degree}")]
    InvalidShape { target: usize, source_degree: usize },

    #[error("entry ({row}, {col}) is outside the tail block of a {rows}x{cols} reduction matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("recurrence step from ({row}, {col}) leaves its valid index range")]
    StepOutOfRange { row: usize, col: usize },

    #[error("dimension mismatch: {left_rows}x{left_cols} times {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix of {rows}x{cols} needs {expected} entries, got {actual}")]
    BadEntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },

    #[error("cannot combine square roots of {left} and {right} exactly")]
    UnresolvedRadical { left: u64, right: u64 },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
