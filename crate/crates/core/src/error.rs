use thiserror::Error;

/// Errors surfaced by the exact and stochastic engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A parameter lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// The request needs a transfer matrix above the configured degree cap.
    #[error("resource limit: degree {degree} exceeds K_max = {k_max}")]
    Resource { degree: usize, k_max: usize },
    /// Malformed textual input (rationals, partitions, targets).
    #[error("parse error: {0}")]
    Parse(String),
    /// Operands of different degree were combined.
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    /// An invariant that must hold for valid input was violated.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
