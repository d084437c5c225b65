use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while building or evaluating a problem instance.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration field failed validation. `field` is the dotted key path.
    #[error("invalid `{field}`: {reason}")]
    InvalidField { field: String, reason: String },

    #[error("no admissible tiles: the facade mask is all false")]
    NoAdmissibleTiles,

    #[error("tile index {index} out of range 1..={count}")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("layout has {got} bits, expected {expected}")]
    LayoutLength { got: usize, expected: usize },

    #[error("layout sets tile {index} which the facade mask forbids")]
    MaskedTile { index: usize },

    #[error("invalid layout specification: {0}")]
    LayoutParse(String),

    #[error("invalid GA configuration: {0}")]
    GaConfig(String),

    #[error("empty population")]
    EmptyPopulation,

    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("malformed data: {0}")]
    Format(String),

    #[error("I/O error on {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn field(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidField { field: field.into(), reason: reason.into() }
    }

    /// True when the error originates from the environment rather than user input.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
