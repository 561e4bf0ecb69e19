use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed caller input (bad permutation, degree mismatch, H not a subgroup, ...).
    #[error("input error: {0}")]
    Input(String),
    /// A data or job file failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
    /// Curated data failed validation (wrong order/index, membership failure).
    #[error("data error: {0}")]
    Data(String),
    /// A configured limit (index, degree, block count, enumeration budget) was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// Something that group theory guarantees failed anyway: an upstream bug.
    #[error("internal consistency violation: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
