use thiserror::Error;

/// A `(twist, degree)` point of the middle-cohomology support.
pub type Point = (i64, usize);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero summand: power {power} is outside [0, {n}]")]
    ZeroSummand { n: usize, power: i64 },

    #[error("dimension must be at least 1")]
    BadDimension,

    #[error("dimension mismatch: expected P^{expected}, got P^{got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid window [{lo}, {hi}]")]
    BadWindow { lo: i64, hi: i64 },

    #[error("window insufficient: {0}")]
    WindowInsufficient(String),

    #[error("dagger violated by {} pair(s)", pairs.len())]
    DaggerViolated { pairs: Vec<(Point, Point)> },

    #[error("table is not the cohomology of a dagger-decomposable bundle: {0}")]
    NotDecomposable(String),

    #[error("window insufficient or inconsistent table: {0}")]
    Inconsistent(String),

    #[error("zero bundle")]
    ZeroBundle,

    #[error("degree m must be at least 1")]
    BadDegree,

    #[error("threshold disagreement: closed form {closed_form}, scan {scan}")]
    ThresholdDisagreement { closed_form: u64, scan: String },

    #[error("a_i mismatch at degree {degree}: decomposition has {found}, H^i(E) is {expected}")]
    CohomologyMismatch {
        degree: usize,
        found: String,
        expected: String,
    },

    #[error("unexpected line twist {twist} in the pushforward decomposition")]
    UnexpectedTwist { twist: i64 },

    #[error("budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("complex check failed: d∘d != 0 in degree {degree}")]
    NotAComplex { degree: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("parse error in summand {index}: {message}")]
    SummandParse { index: usize, message: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable contract name.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroSummand { .. } => "zero_summand",
            Error::BadDimension => "bad_dimension",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::BadWindow { .. } => "bad_window",
            Error::WindowInsufficient(_) => "window_insufficient",
            Error::DaggerViolated { .. } => "dagger_violated",
            Error::NotDecomposable(_) => "not_decomposable",
            Error::Inconsistent(_) => "inconsistent_table",
            Error::ZeroBundle => "zero_bundle",
            Error::BadDegree => "bad_degree",
            Error::ThresholdDisagreement { .. } => "threshold_disagreement",
            Error::CohomologyMismatch { .. } => "a_i_mismatch",
            Error::UnexpectedTwist { .. } => "unexpected_twist",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::NotAComplex { .. } => "not_a_complex",
            Error::Hypothesis(_) => "hypothesis_violated",
            Error::SummandParse { .. } => "summand_parse",
            Error::Parse(_) => "parse",
        }
    }

    /// Mathematical refusals, as opposed to malformed input.
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            Error::WindowInsufficient(_)
                | Error::DaggerViolated { .. }
                | Error::NotDecomposable(_)
                | Error::Inconsistent(_)
                | Error::ThresholdDisagreement { .. }
                | Error::CohomologyMismatch { .. }
                | Error::UnexpectedTwist { .. }
                | Error::BudgetExceeded { .. }
                | Error::NotAComplex { .. }
                | Error::Hypothesis(_)
                | Error::ZeroBundle
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
