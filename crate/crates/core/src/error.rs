use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("precision exhausted: sign undecided at {bits} bits")]
    PrecisionExhausted { bits: u32 },

    #[error("zero coordinate at position {index}")]
    ZeroCoordinate { index: usize },

    #[error("mixed radical bases {first} and {second}; all radical coordinates must share one base")]
    MixedRadicalBases { first: String, second: String },

    #[error("polytope is {dim}-dimensional in ambient dimension {ambient}")]
    NotFullDimensional { dim: usize, ambient: usize },

    #[error("difference lattice has rank {rank} and index {index} in its saturation; expected the full lattice Z^{ambient} (enable normalized mode to renormalize)")]
    LatticeNotSaturated {
        rank: usize,
        index: String,
        ambient: usize,
    },

    #[error("product formula fails for coordinate {index}: sum over places is {sum}")]
    ProductFormula { index: usize, sum: String },

    #[error("point lies outside the domain of the roof function")]
    OutsideDomain,

    #[error("cannot factor {0}: exceeds 64 bits")]
    Factorization(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
