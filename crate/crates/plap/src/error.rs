use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("edge endpoint {vertex} out of range for {m} vertices")]
    EndpointOutOfRange { vertex: usize, m: usize },
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("graph has an isolated vertex (index {0})")]
    IsolatedVertex(usize),
    #[error("graph too large for this operation: {got} vertices exceeds cap {cap}")]
    TooLarge { got: usize, cap: usize },
    #[error("enumeration would exceed the candidate guard ({estimate} > {cap})")]
    EnumerationTooLarge { estimate: u128, cap: u128 },
    #[error("inadmissible degree data: {0}")]
    Inadmissible(String),
    #[error("malformed input at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("word is not reduced")]
    NotReduced,
    #[error("relator length {got} does not match expected {expected}")]
    RelatorLength { expected: usize, got: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
