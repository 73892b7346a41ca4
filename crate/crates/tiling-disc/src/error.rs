use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    /// Invalid parameters (divisibility, range, inadmissible scenario, ...).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// An input violates a structural precondition (non-clique member,
    /// non-complete host, overlapping tiles, ...).
    #[error("structure error: {0}")]
    Structure(String),

    /// An edge outside the domain of a labelling was queried.
    #[error("edge {0}-{1} is not in the domain of the labelling")]
    Domain(u32, u32),

    /// A clique was too small for the requested classification.
    #[error("clique of size {0} cannot be classified (need at least 3 vertices)")]
    Size(usize),

    /// The graph admits no perfect tiling at all.
    #[error("no perfect tiling exists")]
    Infeasible,

    /// Randomised sampling gave up within its restart budget.
    #[error("restart budget of {0} exhausted without finding a perfect tiling")]
    BudgetExhausted(usize),

    /// Template coverage is not uniform: `vertex` is covered `found` times
    /// instead of `expected`.
    #[error("vertex {vertex} lies in {found} template members, expected {expected}")]
    Coverage {
        vertex: u32,
        found: usize,
        expected: usize,
    },

    /// Malformed text graph input.
    #[error("format error at line {line}: {msg}")]
    Format { line: usize, msg: String },

    /// An internal invariant was violated; always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
