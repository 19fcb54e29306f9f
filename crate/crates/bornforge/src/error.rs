//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by constructors and verifiers.
///
/// Structure assembly validates eagerly and names the violated identity;
/// the primary user story of this crate is diagnosing *why* a candidate
/// structure fails.
#[derive(Debug, Error)]
pub enum BornError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    Jacobi(usize, usize, usize),

    #[error("{0} is degenerate")]
    Degenerate(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("not a representation: {0}")]
    NotRepresentation(String),

    #[error("bicross compatibility (matched-pair identity) fails: {0}")]
    Compatibility(String),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, BornError>;
