use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("degree {degree} exceeds the point type limit {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("empty generating set")]
    NoGenerators,

    #[error("cap exceeded: {what} would exceed {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("subgroup is not normal: {0}")]
    NotNormal(String),

    #[error("trivial group: {0}")]
    TrivialGroup(&'static str),

    #[error("group is not abelian: {0}")]
    NotAbelian(&'static str),

    #[error("invalid construction: {0}")]
    InvalidConstruction(String),

    #[error("invalid Galois datum: {0}")]
    InvalidDatum(String),

    #[error("element is not block-preserving")]
    NotBlockPreserving,

    #[error("invalid discriminant input: {0}")]
    InvalidDiscriminant(String),

    #[error("fit needs at least 3 checkpoints with positive counts, got {0}")]
    TooFewPoints(usize),

    #[error("property violated: {0}")]
    PropertyViolation(String),
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
