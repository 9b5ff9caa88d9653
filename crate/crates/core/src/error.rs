use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    /// A rational input had a terminating continued fraction shorter than
    /// the minimum usable truncation depth.
    #[error("expansion of {value} terminates after {got} quotients (need at least {need})")]
    FiniteExpansion {
        value: String,
        got: usize,
        need: usize,
    },

    /// A level-n query was made against a table that is not deep enough to
    /// answer it exactly.
    #[error("level {level} query needs truncation depth >= {need}, table has {depth}")]
    InsufficientDepth {
        level: usize,
        need: usize,
        depth: usize,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A point was outside the domain an operation requires.
    #[error("domain error: {0}")]
    Domain(String),

    /// A brute-force loop exceeded its iteration cap.
    #[error("iteration cap {cap} exceeded ({context})")]
    CapExceeded { cap: u64, context: String },

    /// An iteration/budget limit from the configuration was exceeded.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// A singular frame was requested from a nearly conformal matrix.
    #[error("singular frame ill-defined: log-norm {log_norm} below floor {floor}")]
    IllDefinedFrame { log_norm: f64, floor: f64 },

    /// A construction step failed one of its verification gates.
    #[error("construction step {n} rejected: {reason}")]
    StepRejected { n: usize, reason: String },
}
