use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("invalid Cuntz rank {0} (need n >= 2)")]
    InvalidRank(usize),

    #[error("generator index {index} outside 1..={rank}")]
    LetterOutOfRange { index: usize, rank: usize },

    #[error("expansion would produce {projected} monomials (limit {limit})")]
    ExpansionLimit { projected: u128, limit: usize },

    #[error("level {level} is below the longest co-word length {required}")]
    LevelTooLow { level: usize, required: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("element is not unitary")]
    NotUnitary,

    #[error("images do not satisfy the Cuntz relations: {0}")]
    InvalidEndomorphism(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("malformed scalar: {0}")]
    MalformedScalar(String),

    #[error("construction check failed: {0}")]
    ConstructionFailed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
