use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alphabet size must be at least 1, got {0}")]
    EmptyAlphabet(u32),
    #[error("graph must have at least one node")]
    NoNodes,
    #[error("edge references unknown node `{0}`")]
    UnknownNode(String),
    #[error("label {label} outside 1..={alphabet}")]
    LabelOutOfRange { label: u32, alphabet: u32 },
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: u32, right: u32 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector entries must be strictly positive and finite (entry {index} = {value})")]
    NonPositiveEntry { index: usize, value: f64 },
    #[error("vector must be nonnegative and finite (entry {index} = {value})")]
    NegativeEntry { index: usize, value: f64 },
    #[error("matrix {index} has a negative or non-finite entry {value}")]
    NegativeMatrixEntry { index: usize, value: f64 },
    #[error("matrix set must contain at least one matrix")]
    EmptyMatrixSet,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("size cap exceeded: {what} would be {size}, cap is {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("certificate has no vector for node `{0}`")]
    MissingNodeVector(String),
    #[error("transport of a {flavor} certificate along the {lift} lift is not supported")]
    UnsupportedTransport { flavor: &'static str, lift: String },
    #[error("transported vector for node `{node}` has entry {value} below the positivity floor")]
    ZeroComponent { node: String, value: f64 },
    #[error("matrix {0} is singular")]
    SingularMatrix(usize),
    #[error("inverse of matrix {0} has negative entries; primal norms are not closed under its inverse")]
    InverseNotNonnegative(usize),
    #[error("simplex iteration cap of {0} pivots exceeded")]
    IterationCap(usize),
    #[error("power iteration did not converge in {iterations} steps (last estimate {estimate})")]
    NoConvergence { iterations: usize, estimate: f64 },
    #[error("internal error: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}
