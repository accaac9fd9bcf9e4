use thiserror::Error;

/// Errors produced by the resonance toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid subset mask {bits:#x} for ground set of size {n}")]
    InvalidMask { bits: u64, n: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{method} limited to {limit}, requested {requested} (use a guard override)")]
    GuardExceeded {
        method: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("pivot entry at row {row}, column {col} is zero")]
    ZeroPivot { row: usize, col: usize },

    #[error("integer overflow during {0}")]
    Overflow(&'static str),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
