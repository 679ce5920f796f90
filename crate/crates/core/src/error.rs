use thiserror::Error;

/// Errors produced anywhere in the decoding pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation widths differ: {left} vs {right}")]
    WidthMismatch { left: usize, right: usize },

    #[error("truncation width must be at least 1")]
    ZeroWidth,

    #[error("invalid hex literal: {0}")]
    InvalidHex(String),

    #[error("flip probability {0} is outside (0, 1)")]
    InvalidProbability(f64),

    #[error("invalid detector graph: {0}")]
    InvalidGraph(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {0} is not a detector of the graph")]
    NotADetector(usize),

    #[error("detector {0} cannot reach a boundary or any other active detector")]
    UnreachableDetector(usize),

    #[error("edge ({0}, {1}) is not present in the path graph")]
    MissingEdge(usize, usize),

    #[error("index ({row}, {col}) is out of range for an order-{order} matrix")]
    IndexOutOfRange { row: usize, col: usize, order: usize },

    #[error("graph has odd order {0}; no perfect matching exists")]
    OddOrder(usize),

    #[error("graph has no perfect matching")]
    NoPerfectMatching,

    #[error("graph of order {order} exceeds the oracle limit of {limit}")]
    TooLarge { order: usize, limit: usize },

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
