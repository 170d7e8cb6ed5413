use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid prime {0}: expected an odd prime")]
    InvalidPrime(u64),
    #[error("the alternating measure needs an odd prime, got {0}")]
    EvenPrime(u64),
    #[error("invalid precision {0}: must be at least 1")]
    InvalidPrecision(i64),
    #[error("values live in different p-adic contexts")]
    ContextMismatch,
    #[error("not a p-adic unit: {0}")]
    NonUnit(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid regularization parameter c={0}: need c != 1 and p not dividing c")]
    InvalidC(i64),
    #[error("invalid ball: {0}")]
    InvalidBall(String),
    #[error("invalid branch {branch}: expected 0 <= i < {}", .p - 1)]
    InvalidBranch { branch: u64, p: u64 },
    #[error("budget exceeded: {needed} terms requested, budget {budget}{}", best_suffix(.best_precision))]
    BudgetExceeded {
        needed: u64,
        budget: u64,
        best_precision: Option<i64>,
    },
    #[error("pole at s=1 on branch {branch} (denominator vanishes to working precision)")]
    PoleAtOne { branch: u64 },
    #[error("branch {branch} has no pole at s=1")]
    NotAPole { branch: u64 },
    #[error("level {level} is too deep for p={p} (p^level overflows)")]
    LevelOverflow { p: u64, level: u32 },
}

fn best_suffix(best: &Option<i64>) -> String {
    match best {
        Some(v) => format!(", best achieved precision {v}"),
        None => String::new(),
    }
}

impl Error {
    /// Short machine-readable tag used by the CLI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidPrime(_) => "invalid-prime",
            Error::EvenPrime(_) => "even-prime",
            Error::InvalidPrecision(_) => "invalid-precision",
            Error::ContextMismatch => "context-mismatch",
            Error::NonUnit(_) => "non-unit",
            Error::Domain(_) => "domain",
            Error::PrecisionExhausted(_) => "precision-exhausted",
            Error::DivisionByZero => "division-by-zero",
            Error::Parse { .. } => "parse",
            Error::InvalidC(_) => "invalid-c",
            Error::InvalidBall(_) => "invalid-ball",
            Error::InvalidBranch { .. } => "invalid-branch",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::PoleAtOne { .. } => "pole",
            Error::NotAPole { .. } => "not-a-pole",
            Error::LevelOverflow { .. } => "level-overflow",
        }
    }

    /// Errors that come out of the mathematics rather than from bad input.
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::PoleAtOne { .. }
                | Error::PrecisionExhausted(_)
                | Error::BudgetExceeded { .. }
                | Error::DivisionByZero
                | Error::NotAPole { .. }
                | Error::NonUnit(_)
                | Error::Domain(_)
        )
    }
}
