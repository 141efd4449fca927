use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("indices must be pairwise distinct")]
    NotDistinct,
    #[error("empty input")]
    EmptyInput,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("point {0} is not part of the configuration")]
    PointNotInConfig(String),
    #[error("point set is not trim")]
    NotTrim,
    /// Broken internal state, e.g. a carving step without a witness point.
    #[error("malformed input: {0}")]
    MalformedInput(String),
    /// Well-formed JSON or CSV with the wrong shape.
    #[error("invalid document: {0}")]
    InvalidDocument(String),
    #[error("trimming quotient is not a metric: {0}")]
    QuotientNotMetric(String),
    #[error("not a metric: {0}")]
    NonMetricMatrix(String),
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("invalid cylinder point: {0}")]
    InvalidPoint(String),
    #[error("bad grid step: {0}")]
    BadStep(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    /// Whether the error reports a broken internal invariant rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::QuotientNotMetric(_) | Error::MalformedInput(_))
    }
}
