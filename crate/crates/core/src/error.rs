use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value violated its domain (level outside 1..=5, negative F, ...).
    #[error("invalid {what}: {detail}")]
    Invalid { what: String, detail: String },

    #[error("dimension unassessed: {0}")]
    DimensionUnassessed(String),

    #[error("assessment has no ratings")]
    NoRatings,

    #[error("unknown risk id {0:?}")]
    UnknownRisk(String),

    #[error("duplicate rating for risk {0:?}")]
    DuplicateRating(String),

    #[error("constant sample")]
    ConstantSample,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("rank-deficient design, collinear columns: {}", columns.join(", "))]
    RankDeficient { columns: Vec<String> },

    #[error("unseen level {level:?} for driver {driver}")]
    UnseenLevel { driver: String, level: String },

    #[error("project {project:?} is missing {field}")]
    MissingValue { project: String, field: String },

    /// Malformed input text, located by 1-based line and optional column name.
    #[error("line {line}{}: {detail}", column.as_ref().map(|c| format!(", column {c}")).unwrap_or_default())]
    Parse {
        line: usize,
        column: Option<String>,
        detail: String,
    },

    #[error("model file: {0}")]
    Format(String),

    #[error("fold {fold}: {source}")]
    Fold { fold: usize, source: Box<Error> },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(what: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Invalid {
            what: what.into(),
            detail: detail.into(),
        }
    }

    pub(crate) fn parse(line: usize, column: Option<&str>, detail: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column: column.map(str::to_owned),
            detail: detail.into(),
        }
    }

    /// Short machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Invalid { .. } => "invalid",
            Error::DimensionUnassessed(_) => "dimension-unassessed",
            Error::NoRatings => "no-ratings",
            Error::UnknownRisk(_) => "unknown-risk",
            Error::DuplicateRating(_) => "duplicate-rating",
            Error::ConstantSample => "constant-sample",
            Error::LengthMismatch { .. } => "length-mismatch",
            Error::InsufficientData(_) => "insufficient-data",
            Error::RankDeficient { .. } => "rank-deficient",
            Error::UnseenLevel { .. } => "unseen-level",
            Error::MissingValue { .. } => "missing-value",
            Error::Parse { .. } => "parse",
            Error::Format(_) => "format",
            Error::Fold { source, .. } => source.kind(),
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
