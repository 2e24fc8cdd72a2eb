use std::io;

/// Errors produced by dictionary construction, coding, decoding and simulation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("LFSR degree {0} outside the supported range [2, 16]")]
    UnsupportedDegree(u32),

    #[error("LFSR initial state must be nonzero")]
    ZeroState,

    #[error("polynomial {poly:#x} is not primitive (period {period}, expected {expected})")]
    NotPrimitive { poly: u32, period: usize, expected: usize },

    #[error("polynomial pair is not preferred: max |correlation| {observed} exceeds Gold bound {bound}")]
    NotPreferredPair { observed: i64, bound: i64 },

    #[error(
        "MUB self-check failed: bases {basis_a} and {basis_b} have |<x,y>|^2 * N^2 = {norm_sq}, expected {expected}"
    )]
    MubSelfCheck { basis_a: usize, basis_b: usize, norm_sq: i64, expected: i64 },

    #[error("dense Gram matrix refused: {cols} columns exceeds the limit of {limit}; use streaming rows")]
    GramTooLarge { cols: usize, limit: usize },

    #[error("bit string has length {got}, expected {expected}")]
    BitLength { expected: usize, got: usize },

    #[error("message cannot be mapped back to bits: {0}")]
    Unrepresentable(String),

    #[error("exhaustive search space of {0} messages exceeds the guard of 1e6")]
    SearchSpaceTooLarge(String),

    #[error("malformed dictionary file: {0}")]
    Format(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("resume refused: config digest {found} does not match recorded digest {expected}")]
    DigestMismatch { expected: String, found: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
