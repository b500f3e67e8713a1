use thiserror::Error;

use crate::bounds::VerificationRecord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: usize },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("minor needs two distinct vertices below {n}, got ({i}, {j})")]
    InvalidMinor { i: usize, j: usize, n: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what}: {n} exceeds the limit of {limit}{hint}")]
    TooLarge { what: &'static str, n: usize, limit: usize, hint: &'static str },

    #[error("{what} requires an even order, got {n}")]
    OddOrder { what: &'static str, n: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix entry ({row}, {col}) is not 0 or 1")]
    NotBinary { row: usize, col: usize },

    #[error("matrix is not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },

    #[error("graph is not bipartite")]
    NotBipartite,

    #[error("bipartition is unbalanced ({left} left, {right} right)")]
    Unbalanced { left: usize, right: usize },

    #[error("{what} must be at least {min}, got {value}")]
    OutOfDomain { what: &'static str, value: u64, min: u64 },

    #[error("entry {index} is negative")]
    NegativeEntry { index: usize },

    #[error("empty input for {what}")]
    Empty { what: &'static str },

    #[error("random family {family} needs an explicit seed")]
    MissingSeed { family: &'static str },

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("bound violated on {}: slack {} (graph follows)\n{dump}", record.graph_id, record.slack)]
    Violation { record: Box<VerificationRecord>, dump: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
