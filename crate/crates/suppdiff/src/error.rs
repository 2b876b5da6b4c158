use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("invalid cone: {0}")]
    Cone(String),
    #[error("invalid set: {0}")]
    Set(String),
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("point outside the cone")]
    OutsideCone,
    #[error("dual point outside the interior of the domain: {0}")]
    Domain(String),
    #[error("sampler found no points in the quantifier domain of {0}")]
    EmptyDomain(String),
    #[error("infeasible level: {0}")]
    Infeasible(String),
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("schema: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
