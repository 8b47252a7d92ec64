use thiserror::Error;

/// Errors produced by the library.
///
/// Verdict-style operations (viability, invariant reports, density) return
/// their findings as values; only malformed input, violated hypotheses and
/// exhausted budgets surface here.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("bound exceeded: {what} = {value} is above the limit {limit}")]
    BoundExceeded {
        what: &'static str,
        value: u128,
        limit: u128,
    },

    #[error("Weil bound violated for p={p}, k={k}, l={l}, a={a}: count {count}")]
    WeilViolation {
        p: u64,
        k: u64,
        l: u64,
        a: u64,
        count: u64,
    },

    #[error("prime search exhausted after scanning [{from}, {to})")]
    SearchExhausted { from: u64, to: u64 },

    #[error("strict conditions infeasible: {condition}: {detail}")]
    StrictInfeasible { condition: String, detail: String },

    #[error("invalid prime {p}: {reason}")]
    InvalidPrime { p: u64, reason: String },

    #[error("pin conflict at level {level}: {detail}")]
    PinConflict { level: usize, detail: String },

    #[error("missing checkpoints: {0}")]
    MissingCheckpoints(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("malformed pair file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable short name of the variant, for machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::Hypothesis(_) => "hypothesis",
            Error::BoundExceeded { .. } => "bound-exceeded",
            Error::WeilViolation { .. } => "weil-violation",
            Error::SearchExhausted { .. } => "search-exhausted",
            Error::StrictInfeasible { .. } => "strict-infeasible",
            Error::InvalidPrime { .. } => "invalid-prime",
            Error::PinConflict { .. } => "pin-conflict",
            Error::MissingCheckpoints(_) => "missing-checkpoints",
            Error::Overflow(_) => "overflow",
            Error::Format(_) => "format",
        }
    }
}
