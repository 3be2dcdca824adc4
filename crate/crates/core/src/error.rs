use thiserror::Error;

/// Errors surfaced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter is out of its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A tally was requested over an empty ballot collection.
    #[error("district has no ballots")]
    EmptyDistrict,

    /// Per-run records handed to an aggregation are inconsistent.
    #[error("malformed run records: {0}")]
    MalformedRecords(String),

    /// A configuration file failed validation. The message names the key.
    #[error("configuration error: {0}")]
    Config(String),

    /// Something that should be impossible happened; indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("json error in {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
