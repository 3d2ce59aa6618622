use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum Error {
    #[error("qubit count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("qubit count {n} outside supported range 1..={max}")]
    UnsupportedSize { n: usize, max: usize },
    #[error("operator is not Hermitian (phase exponent {0})")]
    NonHermitian(u8),
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown graph name `{0}`")]
    UnknownGraph(String),
    #[error("arithmetic overflow while evaluating {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
