use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("group order {order} exceeds the configured maximum {max}")]
    Overflow { order: u128, max: usize },

    #[error("invalid projection: {0}")]
    InvalidProjection(String),

    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),

    #[error("group table is not commutative")]
    NonCommutative,

    #[error("element lies in the maximal ideal and has no inverse")]
    NonUnit,

    #[error("census mismatch: {0}")]
    CensusMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("element {0} does not belong to the group")]
    NotInGroup(String),

    #[error("certificates live in different ambient groups")]
    GroupMismatch,

    #[error("certificate does not cover its target: {0}")]
    Uncovered(String),

    #[error("kernel certificate does not cover the full kernel")]
    KernelNotCovered,

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("group {0} is not a p-group")]
    NotPGroup(String),

    #[error("outside the oracle regime: {0}")]
    OracleRegime(String),

    #[error("missing value: {0}")]
    Missing(String),

    #[error("{what} = {value} exceeds the configured maximum {max}")]
    Limit {
        what: &'static str,
        value: u128,
        max: usize,
    },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
