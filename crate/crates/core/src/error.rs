use thiserror::Error;

/// Errors produced while loading a ledger or running an analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column `{column}`: {message}")]
    Parse {
        line: u64,
        column: String,
        message: String,
    },

    #[error("line {line}: duplicate year {year}")]
    DuplicateYear { line: u64, year: i32 },

    #[error("years must be strictly increasing, found {year} after {previous}")]
    UnorderedYears { previous: i32, year: i32 },

    #[error("unknown item `{0}`")]
    UnknownItem(String),

    #[error("item `{item}` missing in year(s) {years:?}")]
    MissingData { item: String, years: Vec<i32> },

    #[error("no observations in {start}..={end}")]
    EmptyRange { start: i32, end: i32 },

    #[error("invalid year range {start}..={end}")]
    Range { start: i32, end: i32 },

    #[error("series are not aligned: {0}")]
    Alignment(String),

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("regressor has zero variance")]
    DegenerateRegressor,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-positive denominator `{item}` = {value} in {year}")]
    DivisionDomain { year: i32, item: String, value: f64 },

    #[error("cannot take logarithm of `{item}` = {value} in {year}")]
    LogDomain { year: i32, item: String, value: f64 },

    #[error("unknown figure id `{0}`")]
    UnknownFigure(String),

    #[error("{analysis}: {source}")]
    Analysis {
        analysis: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn in_analysis(analysis: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::Analysis {
            analysis,
            source: Box::new(source),
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.as_ref().display().to_string();
        move |source| Error::Io { path, source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
