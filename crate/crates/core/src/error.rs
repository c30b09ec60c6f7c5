use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by graph construction, spectral analysis and the simulators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n_vertices} vertices")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },

    #[error("duplicate edge ({0}, {1}) in a simple graph")]
    DuplicateEdge(usize, usize),

    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph is not regular (degrees range over {min}..={max})")]
    NotRegular { min: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular matrix modulo {q}")]
    SingularMatrix { q: u64 },

    #[error("eigensolver did not converge within {budget} Lanczos steps (residual {residual:e})")]
    NoConvergence { budget: usize, residual: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("experiment cancelled")]
    Cancelled,
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
