use thiserror::Error;

/// Errors raised by every operation in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QsError {
    #[error("weight q_{index} = {value} is not positive")]
    NonPositiveWeight { index: usize, value: String },

    #[error("weights sum to {sum}, expected 1")]
    WeightSumMismatch { sum: String },

    #[error("alphabet size {0} is outside the supported range 2..=256")]
    AlphabetSize(usize),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("digit {digit} is out of range for alphabet size {s}")]
    DigitOutOfRange { digit: usize, s: usize },

    #[error("period of a periodic representation must be nonempty")]
    EmptyPeriod,

    #[error("stream exhausted after {available} digits, {needed} requested")]
    StreamExhausted { needed: u64, available: u64 },

    #[error("prefix of {requested} digits exceeds the cap of {cap}")]
    PrefixTooLong { requested: u64, cap: u64 },

    #[error("frequency vector is not on the simplex: {0}")]
    SimplexViolation(String),

    #[error("denominator of the dimension formula vanishes")]
    DegenerateDenominator,

    #[error("dimension {0} lies outside [0, 1]")]
    DimensionOutOfRange(f64),

    #[error("digit subset is empty")]
    EmptySubset,

    #[error("A_k parameter must be a positive integer")]
    NonPositiveK,

    #[error("leading coefficient of the cubic is zero")]
    DegenerateLeadingCoefficient,

    #[error("invalid search interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("independent methods disagree: {0}")]
    InternalDisagreement(String),

    #[error("linear constraint has no feasible point on the simplex")]
    InfeasibleConstraint,

    #[error("linear constraint is vacuous or malformed: {0}")]
    VacuousConstraint(String),

    #[error("oscillating number needs two distinct digits, got c = d = {0}")]
    EqualDigits(usize),

    #[error("experiment digit measure differs from the system weights")]
    NotLebesgueMode,

    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot parse number {0:?}")]
    ParseNumber(String),

    #[error("solver did not converge: {0}")]
    SolverNotConverged(String),

    #[error("integer overflow computing {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, QsError>;
