use thiserror::Error;

use crate::graph::VertexId;

/// Errors raised by graph construction, field operations and verifiers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge list is empty")]
    EmptyGraph,
    #[error("edge ({0}, {1}) has non-positive weight {2}")]
    NonPositiveWeight(VertexId, VertexId, f64),
    #[error("vertex {0} has non-positive measure {1}")]
    NonPositiveMeasure(VertexId, f64),
    #[error("vertex {0} has no measure")]
    MissingMeasure(VertexId),
    #[error("graph is disconnected: vertex {0} is unreachable from vertex {1}")]
    Disconnected(VertexId, VertexId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge ({0}, {1}) is listed more than once")]
    DuplicateEdge(VertexId, VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("exponent {0} is out of range ({1})")]
    ExponentOutOfRange(f64, &'static str),
    #[error("dimension mismatch at vertex {vertex}: expected {expected}, found {found}")]
    DimensionMismatch {
        vertex: VertexId,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("operands live on different graphs")]
    GraphMismatch,
    #[error("operation requires symmetric edge weights")]
    AsymmetricWeights,
    #[error("field is identically zero")]
    ZeroField,
    #[error("invalid Sobolev norm: {0}")]
    InvalidVariant(String),
    #[error("support lies within {found} hops of the window boundary, {required} required")]
    SupportTooClose { required: usize, found: usize },
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("field has no zero vertex to anchor the path bound")]
    NoZeroVertex,
    #[error("window of {len} vertices is too small, need at least {required}")]
    WindowTooSmall { len: usize, required: usize },
    #[error("need at least {required} data points, got {found}")]
    InsufficientData { required: usize, found: usize },
    #[error("error value {0} at index {1} is not positive")]
    NonPositiveError(f64, usize),
    #[error("model does not satisfy the hypotheses of this experiment: {0}")]
    HypothesisViolated(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by malformed input documents rather than
    /// violated mathematical preconditions.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Io(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
