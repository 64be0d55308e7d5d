use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid edge ({0}, {1}): {2}")]
    InvalidEdge(usize, usize, &'static str),
    #[error("graph has {0} vertices, brute force is capped at {1}")]
    CapExceeded(usize, usize),
    #[error("graph is not bipartite: {0}")]
    NotBipartite(String),
    #[error("graph is not a forest")]
    NotAForest,
    #[error("fugacity must lie in [1, inf], got {0}")]
    InvalidFugacity(f64),
    #[error("update rate must be positive and finite, got {0} at vertex {1}")]
    InvalidRate(f64, usize),
    #[error("vertex set is not independent: edge ({0}, {1}) is covered")]
    NotIndependent(usize, usize),
    #[error("invalid dense parameters: {0}")]
    InvalidDenseParams(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("random walk has non-positive drift (p_up = {0}, p_down = {1})")]
    InvalidDrift(f64, f64),
    #[error("invalid birth-death chain: {0}")]
    InvalidChain(String),
    #[error("average degree {0} is outside the regime d > e^2")]
    OutOfRegime(f64),
    #[error("trial record lacks the snapshot needed: {0}")]
    InsufficientRecord(String),
    #[error("no records to summarize")]
    EmptyInput,
    #[error("config error: {0}")]
    Config(String),
    #[error("missing summary for {0}")]
    IncompleteRun(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
