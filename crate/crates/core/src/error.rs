use num::BigInt;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input does not match the expected JSON layout.
    #[error("schema error at `{field}`: {reason}")]
    Schema { field: String, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not symmetric (entry ({row}, {col}))")]
    NotSymmetric { row: usize, col: usize },

    /// `minor` is the 1-based size of the first leading principal minor that is not positive.
    #[error("matrix is not positive definite (leading principal minor {minor} is not positive)")]
    NotPositiveDefinite { minor: usize },

    #[error("norm {norm} of the vector exceeds the enumeration bound {bound}")]
    BoundTooSmall { norm: String, bound: String },

    #[error("linear system has no solution")]
    NoSolution,

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid involution: {0}")]
    InvalidInvolution(String),

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("invalid Hermitian module: {0}")]
    InvalidModule(String),

    /// `witness` is a nonzero coordinate vector x with Tr(x x*) <= 0.
    #[error("involution is not positive: Tr(x x*) <= 0 for x = {witness:?}")]
    NotPositiveInvolution { witness: Vec<BigInt> },

    #[error("invalid idempotents: {0}")]
    InvalidIdempotents(String),

    #[error("invalid polarised Hodge structure: {0}")]
    InvalidHodgeStructure(String),

    #[error("rank {rank} exceeds the desk-scale limit {limit}")]
    RankTooLarge { rank: usize, limit: usize },

    #[error("internal error: decomposition is incomplete ({0})")]
    InternalIncomplete(String),

    #[error("internal error: block is not stable under the order ({0})")]
    OStabilityViolation(String),

    #[error("internal error: invariant failed ({0})")]
    InternalInvariantFailure(String),
}

impl Error {
    pub(crate) fn schema(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Schema { .. }
            | Error::DimensionMismatch(_)
            | Error::NotSymmetric { .. }
            | Error::InvalidAlgebra(_)
            | Error::InvalidInvolution(_)
            | Error::InvalidOrder(_)
            | Error::InvalidModule(_)
            | Error::InvalidIdempotents(_)
            | Error::InvalidHodgeStructure(_)
            | Error::BoundTooSmall { .. }
            | Error::NoSolution => 1,
            Error::NotPositiveDefinite { .. } | Error::NotPositiveInvolution { .. } => 2,
            Error::RankTooLarge { .. } => 3,
            Error::InternalIncomplete(_)
            | Error::OStabilityViolation(_)
            | Error::InternalInvariantFailure(_) => 4,
        }
    }

    /// Short machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Schema { .. } => "Schema",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotSymmetric { .. } => "NotSymmetric",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::BoundTooSmall { .. } => "BoundTooSmall",
            Error::NoSolution => "NoSolution",
            Error::InvalidAlgebra(_) => "InvalidAlgebra",
            Error::InvalidInvolution(_) => "InvalidInvolution",
            Error::InvalidOrder(_) => "InvalidOrder",
            Error::InvalidModule(_) => "InvalidModule",
            Error::NotPositiveInvolution { .. } => "NotPositiveInvolution",
            Error::InvalidIdempotents(_) => "InvalidIdempotents",
            Error::InvalidHodgeStructure(_) => "InvalidHodgeStructure",
            Error::RankTooLarge { .. } => "RankTooLarge",
            Error::InternalIncomplete(_) => "InternalIncomplete",
            Error::OStabilityViolation(_) => "OStabilityViolation",
            Error::InternalInvariantFailure(_) => "InternalInvariantFailure",
        }
    }
}
