use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mode index {index} out of range for a catalog of {len} modes")]
    InvalidMode { index: usize, len: usize },
    #[error("unknown mode label `{0}`")]
    UnknownMode(String),
    #[error("duplicate mode label `{0}`")]
    DuplicateMode(String),
    #[error("states or operators refer to different mode catalogs")]
    CatalogMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid occupation {occ:?}: {reason}")]
    InvalidOccupation { occ: Vec<u8>, reason: &'static str },
    #[error("not a permutation of 0..{n}: {perm:?}")]
    NotPermutation { perm: Vec<usize>, n: usize },
    #[error("tensor symmetry does not match {expected} statistics")]
    SymmetryMismatch { expected: &'static str },
    #[error("state has weight {weight:.3e} outside the effectively distinguishable subspace")]
    OutsideDomain { weight: f64 },
    #[error("external states are not orthonormal (deviation {0:.3e})")]
    NotOrthonormal(f64),
    #[error("single-particle operators do not commute (norm of commutator {0:.3e})")]
    NonCommuting(f64),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("state must have a definite particle number, found sectors {0:?}")]
    IndefiniteParticleNumber(Vec<usize>),
    #[error("size limit exceeded: {0}")]
    TooLarge(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("state has no support on the chosen subspace")]
    NoSupport,
    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("malformed decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("state has zero norm")]
    ZeroState,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Scenario(String),
}

/// Syntax or semantic error in scenario text, positioned at a 1-based
/// line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}
