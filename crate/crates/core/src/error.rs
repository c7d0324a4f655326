use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch")]
    RingMismatch,
    #[error("not a unit")]
    NotAUnit,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("oracle size limit: {0}")]
    OracleSizeLimit(String),
    #[error("expansion guard exceeded: ambient n = {n} > {limit} (set ABPC_GUARD_N to override)")]
    GuardExceeded { n: usize, limit: usize },
    #[error("unknown output `{0}`")]
    UnknownOutput(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("construction requires characteristic zero")]
    RequiresCharacteristicZero,
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("ring is not a field")]
    NotAField,
    #[error("determinant is not homogeneous of degree {0}")]
    NotHomogeneous(usize),
    #[error("invalid graph: {}", .0.join("; "))]
    InvalidGraph(Vec<String>),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
