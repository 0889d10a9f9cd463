use thiserror::Error;

/// Errors raised by graph construction, generation, and curvature evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph must be simple: {0}")]
    NotSimple(String),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("support pair ({0}, {1}) is disconnected")]
    Connectivity(usize, usize),
    #[error("measures are not normalized: {0}")]
    Normalization(String),
    #[error("transportation problem infeasible")]
    Infeasible,
    #[error("outside the domain of the modulus: {0}")]
    Domain(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
