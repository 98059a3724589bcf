use thiserror::Error;

/// Errors produced by dataset construction, parsing and mining.
#[derive(Debug, Error)]
pub enum Error {
    /// A type id that does not exist in the dataset's type table.
    #[error("unknown event type id {0}")]
    UnknownType(u32),

    /// The dataset holds no instances of the requested type, so a density
    /// ratio against it is undefined and expansion with it is impossible.
    #[error("no instances of event type id {0} in the dataset")]
    NoGlobalInstances(u32),

    /// A neighborhood-density average over an empty tail event set.
    #[error("empty tail event set")]
    EmptyTail,

    /// A density denominator that is not strictly positive.
    #[error("non-positive volume {0}")]
    NonPositiveVolume(f64),

    /// Invalid geometry, mining or generator configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Structurally invalid dataset (extent violations, label clashes, ...).
    #[error("invalid dataset: {0}")]
    InvalidData(String),

    /// Malformed input text; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
