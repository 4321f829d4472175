use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("group rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("undefined form: {0}")]
    UndefinedForm(String),

    /// No `h` with `n·h = value` in the value group.
    #[error("{value} is not divisible by {n} in the value group")]
    Divisibility { value: String, n: i64 },

    /// A finite residue field ran out of representatives.
    #[error("residue field exhausted: needed {needed}, field has {available}")]
    ExhaustedResidues { needed: usize, available: usize },

    #[error("precision exhausted: {0}")]
    Precision(String),

    #[error("negative valuation {0}: residue undefined")]
    NegativeValuation(String),

    #[error("value outside the field's group: {0}")]
    GroupMismatch(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("no segment of phi reaches {0} on the range")]
    NoSegment(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("series diverges at valuation {0}")]
    DivergesAt(String),

    #[error("series is not normalized: {0}")]
    NotNormalized(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("no valuation gap: {0}")]
    NoGap(String),

    #[error("invalid counterexample parameters: {0}")]
    InvalidCounterexample(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("syntax error at byte {offset}: expected {}, found {found:?}", expected.join(" | "))]
    Syntax { offset: usize, expected: Vec<String>, found: String },
}

impl Error {
    /// Stable machine-readable name, used for `error.kind` in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::RankMismatch { .. } => "RankMismatch",
            Error::UndefinedForm(_) => "UndefinedForm",
            Error::Divisibility { .. } => "DivisibilityError",
            Error::ExhaustedResidues { .. } => "ExhaustedResidues",
            Error::Precision(_) => "PrecisionError",
            Error::NegativeValuation(_) => "NegativeValuation",
            Error::GroupMismatch(_) => "GroupMismatch",
            Error::FieldMismatch(_) => "FieldMismatch",
            Error::DivisionByZero => "DivisionByZero",
            Error::NoSegment(_) => "NoSegment",
            Error::HypothesisViolation(_) => "HypothesisViolation",
            Error::DivergesAt(_) => "DivergesAt",
            Error::NotNormalized(_) => "NotNormalized",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::NoGap(_) => "NoGap",
            Error::InvalidCounterexample(_) => "InvalidCounterexample",
            Error::Precondition(_) => "PreconditionViolation",
            Error::Syntax { .. } => "SyntaxError",
        }
    }

    /// Errors that witness a failing field hypothesis rather than a bad input.
    pub fn is_hypothesis_witness(&self) -> bool {
        matches!(self, Error::Divisibility { .. } | Error::ExhaustedResidues { .. })
    }

    /// Process exit code used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            e if e.is_hypothesis_witness() => 2,
            Error::Precision(_) | Error::VerificationFailed(_) => 3,
            _ => 4,
        }
    }
}
