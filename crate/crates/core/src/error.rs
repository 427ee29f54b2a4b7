use thiserror::Error;

/// Errors raised by validation and by the exact computations.
///
/// Variant names are stable: the CLI prints them verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix entry ({row},{col}) is {value}, expected 0 or 1")]
    NotZeroOne { row: usize, col: usize, value: i64 },
    #[error("symbol {0} has an empty row or column")]
    EmptyRowOrColumn(usize),
    #[error("matrix is reducible")]
    Reducible,
    #[error("matrix is a permutation matrix")]
    Permutation,
    #[error("checked integer arithmetic overflowed")]
    Overflow,
    #[error("no value given for word {0}")]
    MissingWord(String),
    #[error("word {0} is not admissible")]
    InadmissibleWord(String),
    #[error("word {0} given twice")]
    DuplicateWord(String),
    #[error("orbit-sum exponent takes a negative value")]
    NegativeExponent,
    #[error("source words do not form a cylinder partition: {0}")]
    SrcNotPartition(String),
    #[error("destination words do not form a cylinder partition: {0}")]
    DstNotPartition(String),
    #[error("pair ({src}, {dst}) joins words with different follower sets")]
    FollowerMismatch { src: String, dst: String },
    #[error("operands live on different shift spaces")]
    SpecMismatch,
    #[error("bad generator symbols: {0}")]
    BadSymbols(String),
    #[error("coder input words do not form a cylinder partition: {0}")]
    NotPartition(String),
    #[error("coder junction {first}·{second} is admissible but its image is not")]
    JunctionInadmissible { first: String, second: String },
    #[error("inverse coder does not validate: {0}")]
    InverseInvalid(String),
    #[error("stage {0} does not start on the space the previous stage ends on")]
    StageMismatch(usize),
    #[error("no orbit-relation pair (k,l) with k,l <= {bound} on cylinder {word}")]
    BoundExceeded { word: String, bound: usize },
    #[error("cylinder refinement reached the depth cap {0}")]
    DepthCapExceeded(usize),
    #[error("witness is not Gamma-strongly continuous orbit equivalent for the given element")]
    NotGammaScoe,
    #[error("the identity element was supplied where a non-identity element is required")]
    IdentityElement,
    #[error("symbolic and representative-point computations disagree on cylinder {0}")]
    RepresentativeMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotSquare => "NotSquare",
            Error::NotZeroOne { .. } => "NotZeroOne",
            Error::EmptyRowOrColumn(_) => "EmptyRowOrColumn",
            Error::Reducible => "Reducible",
            Error::Permutation => "Permutation",
            Error::Overflow => "Overflow",
            Error::MissingWord(_) => "MissingWord",
            Error::InadmissibleWord(_) => "InadmissibleWord",
            Error::DuplicateWord(_) => "DuplicateWord",
            Error::NegativeExponent => "NegativeExponent",
            Error::SrcNotPartition(_) => "SrcNotPartition",
            Error::DstNotPartition(_) => "DstNotPartition",
            Error::FollowerMismatch { .. } => "FollowerMismatch",
            Error::SpecMismatch => "SpecMismatch",
            Error::BadSymbols(_) => "BadSymbols",
            Error::NotPartition(_) => "NotPartition",
            Error::JunctionInadmissible { .. } => "JunctionInadmissible",
            Error::InverseInvalid(_) => "InverseInvalid",
            Error::StageMismatch(_) => "StageMismatch",
            Error::BoundExceeded { .. } => "BoundExceeded",
            Error::DepthCapExceeded(_) => "DepthCapExceeded",
            Error::NotGammaScoe => "NotGammaScoe",
            Error::IdentityElement => "IdentityElement",
            Error::RepresentativeMismatch(_) => "RepresentativeMismatch",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse { .. } => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn checked_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn checked_sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

pub(crate) fn checked_mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow)
}
