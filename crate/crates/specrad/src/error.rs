//! Crate-wide error type.

/// Errors produced by samplers, enumerations, solvers, and file I/O.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid parameters or malformed configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Operation not supported for the given inputs (e.g. infinite moment,
    /// sparse storage for a law without an atom at zero).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A numerical routine failed to converge or produced non-finite values.
    #[error("numerical error in {op} after {iterations} iterations: {detail}")]
    Numerical {
        op: &'static str,
        iterations: usize,
        detail: String,
    },

    /// Malformed binary file; `offset` points at the first offending byte.
    #[error("parse error at byte {offset}: {what}")]
    Parse { offset: u64, what: String },

    /// A state space is too large for the requested exact computation.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An exhaustive enumeration ran past its configured budget. Any partial
    /// tally is unusable.
    #[error("enumeration budget exceeded after {steps} steps (budget {budget})")]
    Budget { steps: u64, budget: u64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
