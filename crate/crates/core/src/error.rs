use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("coordinate index {0} out of range (expected 0, 1 or 2)")]
    Index(usize),
    #[error("malformed embedding image: {0}")]
    MalformedImage(String),
    #[error("degenerate pair: both points carry identical digit data")]
    DegeneratePair,
    #[error("division error: {0}")]
    Division(String),
    #[error("inconsistent complex: {0}")]
    Consistency(String),
    #[error("malformed column {column}: {reason}")]
    MalformedColumn { column: usize, reason: String },
    #[error("cloud has {0} points, brute-force oracle accepts at most 12")]
    Size(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no non-rigid path from vertex {from} to vertex {to}")]
    Disconnected { from: usize, to: usize },
    #[error("complexes not nested between scales {lower} and {upper}")]
    Monotonicity { lower: String, upper: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
