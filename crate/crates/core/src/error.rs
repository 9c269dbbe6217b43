use thiserror::Error;

/// Errors reported by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("input contains no edge records")]
    EmptyInput,

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("graph has {n} nodes; exhaustive search is limited to {max}")]
    TooLarge { n: usize, max: usize },

    #[error("z_value is undefined for a graph without negative edges")]
    NoNegativeEdges,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
