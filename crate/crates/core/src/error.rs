use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no vertices")]
    NoVertices,

    #[error("invalid scenario shape: {0}")]
    InvalidShape(String),

    #[error("representation mismatch: expected {expected}, found {found}")]
    RepresentationMismatch { expected: String, found: String },

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("unreachable pair ({0}, {1})")]
    UnreachablePair(usize, usize),

    #[error("invalid node index {index} (graph has {node_count} nodes)")]
    InvalidNode { index: usize, node_count: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid measurement set: {0}")]
    InvalidMeasurement(String),

    #[error("malformed distribution: {0}")]
    MalformedDistribution(String),

    #[error("degenerate reference: {0}")]
    DegenerateReference(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable tag used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NoVertices => "no_vertices",
            Error::InvalidShape(_) => "invalid_shape",
            Error::RepresentationMismatch { .. } => "representation_mismatch",
            Error::OutOfRange(_) => "out_of_range",
            Error::UnreachablePair(..) => "unreachable_pair",
            Error::InvalidNode { .. } => "invalid_node",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::InvalidState(_) => "invalid_state",
            Error::InvalidMeasurement(_) => "invalid_measurement",
            Error::MalformedDistribution(_) => "malformed_distribution",
            Error::DegenerateReference(_) => "degenerate_reference",
            Error::InvalidSample(_) => "invalid_sample",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
