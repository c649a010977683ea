use thiserror::Error;

use crate::green::GreenRelation;
use crate::semiring::SemifieldId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands belong to different semifields ({0} and {1})")]
    MixedSemifields(SemifieldId, SemifieldId),
    #[error("the zero element has no inverse")]
    NotInvertible,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index ({row}, {col}) out of range for a {n}x{n} matrix")]
    IndexOutOfRange { n: usize, row: usize, col: usize },
    #[error("matrix unit coefficient must be non-zero")]
    ZeroCoefficient,
    #[error("matrix is not monomial (hence not invertible)")]
    NotMonomial,
    #[error("{0} is only decidable over the boolean semifield")]
    UndecidableOverSemifield(GreenRelation),
    #[error("factor rank is undetermined for this matrix over {0}")]
    RankUndetermined(SemifieldId),
    #[error("linear map is not bijective: {0}")]
    NotBijective(String),
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("unsupported parameters: {0}")]
    UnsupportedParams(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
