use thiserror::Error;

/// Errors produced by the dimensioning library.
///
/// Precondition and domain violations always name the violated bound so
/// callers (and the CLI) can report something actionable.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A value fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `n_ru` admits no divisor pair (p, q) with both factors >= n.
    #[error("no latin-feasible factorization: {n_ru} resource units cannot be split into p x q with p, q >= {n}")]
    NoLatinFactorization { n_ru: u64, n: u64 },

    /// A formula produced a value too large to represent as a resource count.
    #[error("result out of range: {0}")]
    Range(String),

    /// An iterative method hit its iteration cap before converging.
    #[error("no convergence: {0}")]
    Convergence(String),

    /// Brute-force enumeration refused: the joint pattern space is too big.
    #[error("state space too large: {patterns} patterns over {assignments} devices give {size:.3e} joint assignments (limit {limit:.1e})")]
    StateSpaceTooLarge {
        patterns: u64,
        assignments: u64,
        size: f64,
        limit: f64,
    },

    /// Too few samples to resolve the requested failure-probability target.
    #[error("statistical precondition violated: {0}")]
    StatisticalPrecondition(String),

    /// Invariant that should be unreachable was violated.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
