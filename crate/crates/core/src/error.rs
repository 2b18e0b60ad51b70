use thiserror::Error;

/// Everything that can go wrong while evaluating an Euler number, a zeta
/// value or a p-adic integral.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("pole: |{what}| = {magnitude:e} is below the pole tolerance")]
    Pole { what: String, magnitude: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("not a unit: {0}")]
    NotAUnit(String),

    #[error("precision budget exceeded: working precision p^{have} but p^{need} is required")]
    PrecisionBudget { have: u32, need: u32 },

    #[error("level sums did not stabilise to valuation {target} by level {level}")]
    NonConvergence { target: u32, level: u32 },

    #[error("series truncation cap of {0} terms reached")]
    TruncationCap(usize),

    #[error("unsupported character: {0}")]
    UnsupportedCharacter(String),

    #[error("cannot embed root of unity: {0}")]
    Embedding(String),

    #[error("evaluation paths disagree by {diff:e} (allowed {allowed:e})")]
    CrossCheck { diff: f64, allowed: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag, used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero(_) => "division_by_zero",
            Error::Pole { .. } => "pole",
            Error::Domain(_) => "domain",
            Error::OutOfRange(_) => "out_of_range",
            Error::NotAUnit(_) => "not_a_unit",
            Error::PrecisionBudget { .. } => "precision_budget",
            Error::NonConvergence { .. } => "non_convergence",
            Error::TruncationCap(_) => "truncation_cap",
            Error::UnsupportedCharacter(_) => "unsupported_character",
            Error::Embedding(_) => "embedding",
            Error::CrossCheck { .. } => "cross_check",
            Error::Parse(_) => "parse",
        }
    }

    /// Process exit code: 2 for domain-type errors, 3 when an internal cap
    /// or consistency check stopped the computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. } | Error::TruncationCap(_) | Error::CrossCheck { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
