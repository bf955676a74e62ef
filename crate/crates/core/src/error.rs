use thiserror::Error;

pub type Result<T> = std::result::Result<T, SpxError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpxError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected: vertices {0} and {1} are not reachable from each other")]
    DisconnectedGraph(usize, usize),

    #[error("directed subgraph contains a cycle")]
    NotADag,

    #[error("generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },

    #[error("degenerate segment (zero length)")]
    DegenerateSegment,

    #[error("vertices {0} and {1} coincide")]
    CoincidentVertices(usize, usize),

    #[error("linear system is singular")]
    SingularSystem,

    #[error("linear program did not converge within {0} pivots")]
    LpFailure(usize),

    #[error("gradient step produced a non-finite coordinate at iteration {0}")]
    NonFiniteUpdate(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for SpxError {
    fn from(e: std::io::Error) -> Self {
        SpxError::Io(e.to_string())
    }
}
