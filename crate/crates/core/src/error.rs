use thiserror::Error;

/// Errors raised by series arithmetic, generators and verification drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient at the lowest stored exponent {exponent} is zero")]
    ZeroLeadingCoefficient { exponent: i64 },

    #[error("internal mismatch in {what}: exponent {exponent}, {lhs} vs {rhs}")]
    InternalMismatch {
        what: String,
        exponent: i64,
        lhs: String,
        rhs: String,
    },

    #[error("series is not a polynomial of degree <= {max_deg} in X (residual has order {residual_order})")]
    NotRepresentable { max_deg: usize, residual_order: i64 },

    #[error("insufficient precision: need {required}, have {available}")]
    InsufficientPrecision { required: i64, available: i64 },

    #[error("insufficient bilateral range: {needed} terms needed on the {side} side, {given} given")]
    InsufficientRange {
        side: &'static str,
        needed: usize,
        given: usize,
    },

    #[error("support violation in matrix {which} row {row}: nonzero entry at column {col} outside [{lo}, {hi}]")]
    SupportViolation {
        which: String,
        row: usize,
        col: i64,
        lo: i64,
        hi: i64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("corrupt cache entry {path}: {reason}")]
    CacheCorrupt { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
