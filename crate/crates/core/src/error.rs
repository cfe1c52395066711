//! Crate-wide error type.
//!
//! Every fallible operation returns [`Error`]. Validation routines that are
//! expected to report *findings* (rather than fail) return dedicated report
//! types instead; `Error` is reserved for contract violations, unsupported
//! inputs, and genuine computation failures.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("mixed-ring operands: {0}")]
    MixedRings(String),

    #[error("not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("invalid group data: {0}")]
    InvalidGroup(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("invalid object: {0}")]
    InvalidObject(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("unsupported characteristic: {0}")]
    UnsupportedCharacteristic(String),

    #[error("group order {order} is not invertible in characteristic {characteristic}")]
    GroupOrderNotInvertible { order: usize, characteristic: u64 },

    #[error("isolated-singularity criterion unreliable: characteristic {p} divides every exponent of the potential, so all partial derivatives vanish")]
    CriterionUnreliable { p: u64 },

    #[error("not an idempotent modulo the given ideal: {0}")]
    NotIdempotentModIdeal(String),

    #[error("ideal is not nilpotent (stabilized at a nonzero power)")]
    IdealNotNilpotent,

    #[error("degree window exhausted: {0}; increase the degree bound")]
    DegreeWindowExhausted(String),

    #[error("no two-periodic tail detected within {steps} resolution steps")]
    NoPeriodicTail { steps: usize },

    #[error("no homotopy witness exists for the requested pair")]
    NoHomotopy,

    #[error("isomorphism search failed: {0}")]
    IsoSearchFailed(String),

    #[error("unsupported base change: {0}")]
    UnsupportedBaseChange(String),

    #[error("factorization out of range: {0}")]
    FactorizationOutOfRange(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("computation cancelled")]
    Cancelled,

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
