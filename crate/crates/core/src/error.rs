use thiserror::Error;

pub type Result<T, E = EmcError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmcError {
    #[error("ground set size {0} outside supported range 1..=64")]
    GroundSetSize(u32),
    #[error("element {x} outside ground set [1, {n}]")]
    ElementOutOfRange { x: u32, n: u32 },
    #[error("rank {rank} out of range for {k}-subsets of [{n}]")]
    RankOutOfRange { rank: u64, n: u32, k: u32 },
    #[error("malformed set: {0}")]
    MalformedSet(String),
    #[error("duplicate set {0} in family")]
    DuplicateSet(String),
    #[error("families live on different ground sets or uniformities")]
    ShapeMismatch,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("family is not left-compressed: {0}")]
    NotLeftCompressed(String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("family json: {0}")]
    Json(String),
}
