use thiserror::Error;

/// Errors surfaced by graph construction, rewriting and the operator layer.
#[derive(Debug, Error)]
pub enum KgError {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("edges not composable at position {position}: range of `{left}` is {left_range}, source of `{right}` is {right_source}")]
    NotComposable {
        position: usize,
        left: String,
        left_range: String,
        right: String,
        right_source: String,
    },

    #[error("incomplete factorization table: no square for the word ({0}, {1})")]
    IncompleteTable(String, String),

    #[error("ambiguous factorization table: {count} squares cover the word ({first}, {second})")]
    AmbiguousTable {
        first: String,
        second: String,
        count: u32,
    },

    #[error("transition matrices for colors {0} and {1} do not commute (first mismatch at row {2}, column {3})")]
    NonCommuting(usize, usize, usize, usize),

    #[error("three-color consistency fails for the word [{0}]")]
    CubeInconsistent(String),

    #[error("degree error: {0}")]
    Degree(String),

    #[error("unknown vertex label `{0}`")]
    UnknownVertex(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("no operator assigned to edge label `{0}`")]
    MissingOperator(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}

pub type Result<T> = std::result::Result<T, KgError>;
