use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group order {order} exceeds the configured bound {bound}")]
    BoundExceeded { order: usize, bound: usize },
    #[error("unknown group name `{0}`")]
    UnknownGroup(String),
    #[error("invalid abelian spec: {0}")]
    InvalidSpec(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroups are not comparable")]
    NotComparable,
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("singular matrix")]
    Singular,
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid operation: {0}")]
    InvalidOp(String),
    #[error("cross-check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
