use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("instance has no voters")]
    NoVoters,
    #[error("instance has no candidates")]
    NoCandidates,
    #[error("voter {voter} has weight 0")]
    ZeroWeight { voter: usize },
    #[error("dimension mismatch: {what} has {found} coordinates, expected {expected}")]
    Dimension {
        what: String,
        expected: usize,
        found: usize,
    },
    #[error("distance matrix must be {expected}x{expected}, found {found}")]
    MatrixShape { expected: usize, found: String },
    #[error("distance matrix is not symmetric at ({row}, {col}): {forward} vs {backward}")]
    Asymmetric {
        row: usize,
        col: usize,
        forward: f64,
        backward: f64,
    },
    #[error("distance matrix has nonzero diagonal entry at {index}: {value}")]
    NonzeroDiagonal { index: usize, value: f64 },
    #[error("invalid distance {value} at ({row}, {col})")]
    InvalidDistance { row: usize, col: usize, value: f64 },
    #[error("invalid value {value} for {what}")]
    InvalidNumber { what: String, value: f64 },
    #[error("voter {voter} has an empty acceptability ball")]
    EmptyApproval { voter: usize },
    #[error("{what} is not a permutation of the {m} candidates")]
    NotPermutation { what: String, m: usize },
    #[error(
        "declared ranking of voter {voter} puts {farther} before the strictly closer {closer}"
    )]
    InconsistentRanking {
        voter: usize,
        farther: usize,
        closer: usize,
    },
    #[error("candidate index {index} out of range (m = {m})")]
    UnknownCandidate { index: usize, m: usize },
    #[error("voter index {index} out of range ({groups} voter entries)")]
    UnknownVoter { index: usize, groups: usize },
    #[error("profile mismatch: {0}")]
    ProfileMismatch(String),
    #[error("scoring vector has length {found}, expected {expected}")]
    ScoringLength { expected: usize, found: usize },
    #[error("enumeration of {what} needs {count} cases, above the limit {limit}")]
    SizeGuard {
        what: String,
        count: u128,
        limit: u128,
    },
    #[error("unknown rule {0:?}")]
    UnknownRule(String),
    #[error("divisibility: {0}")]
    Divisibility(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}
