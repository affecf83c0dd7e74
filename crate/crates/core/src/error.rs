use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid field modulus: {0}")]
    BadModulus(String),

    #[error("field order {0} exceeds the supported bound 2^16")]
    FieldTooLarge(u64),

    #[error("operands live in different fields")]
    FieldMismatch,

    #[error("element code {code} is out of range for a field of order {q}")]
    InvalidElement { code: u64, q: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot invert a value that is zero on its whole known window")]
    ZeroToPrecision,

    #[error("valuation of a value that is zero to precision is unknown (floor {floor})")]
    UnknownValuation { floor: i64 },

    #[error("insufficient precision: known down to s^{have}, need s^{need}")]
    InsufficientPrecision { have: i64, need: i64 },

    #[error("t-truncation {have} too short, at least {required} is needed")]
    TruncationInsufficient { have: usize, required: usize },

    #[error("coefficient growth does not decay fast enough to evaluate at theta")]
    NoDecay,

    #[error("enumeration needs {required} terms, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("coordinate {coordinate} is outside the convergence domain ({detail})")]
    Domain { coordinate: usize, detail: String },

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("window too short: {available} equations for {required} needed")]
    WindowTooShort { available: usize, required: usize },

    #[error("identity check failed: {0}")]
    IdentityCheckFailed(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag used in structured output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::BadModulus(_) => "bad_modulus",
            Error::FieldTooLarge(_) => "field_too_large",
            Error::FieldMismatch => "field_mismatch",
            Error::InvalidElement { .. } => "invalid_element",
            Error::DivisionByZero => "division_by_zero",
            Error::ZeroToPrecision => "zero_to_precision",
            Error::UnknownValuation { .. } => "unknown_valuation",
            Error::InsufficientPrecision { .. } => "insufficient_precision",
            Error::TruncationInsufficient { .. } => "truncation_insufficient",
            Error::NoDecay => "no_decay",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Domain { .. } => "domain",
            Error::InvalidIndex(_) => "invalid_index",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::WindowTooShort { .. } => "window_too_short",
            Error::IdentityCheckFailed(_) => "identity_check_failed",
            Error::Unsupported(_) => "unsupported",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
