use thiserror::Error;

/// Every failure a domain operation in this crate can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate label `{0}` in finite set")]
    DuplicateLabel(String),
    #[error("label `{label}` is not an element of the {context}")]
    UnknownLabel { label: String, context: String },
    #[error("function is not total: `{0}` has no image")]
    NotTotal(String),
    #[error("domain/codomain mismatch: {0}")]
    Mismatch(String),
    #[error("square does not commute")]
    NonCommutingSquare,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("negative off-diagonal entry H[{row}][{col}] = {value}")]
    NegativeOffDiagonal {
        row: String,
        col: String,
        value: String,
    },
    #[error("column `{col}` sums to {sum}, expected 0")]
    ColumnSumNonzero { col: String, sum: String },
    #[error("map is not injective: {0}")]
    NotInjective(String),
    #[error("map is not surjective: {0}")]
    NotSurjective(String),
    #[error("map is not a bijection: {0}")]
    NotBijection(String),
    #[error("invalid stochastic weights: {0}")]
    BadWeights(String),
    #[error("section mismatch: {0}")]
    SectionMismatch(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("invalid decoration: {0}")]
    InvalidDecoration(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("size limit exceeded: {size} > {limit}")]
    SizeLimitExceeded { size: usize, limit: usize },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown generator kind `{0}`")]
    UnknownKind(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// The variant name, used as a stable error code in JSON output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DuplicateLabel(_) => "DuplicateLabel",
            Error::UnknownLabel { .. } => "UnknownLabel",
            Error::NotTotal(_) => "NotTotal",
            Error::Mismatch(_) => "Mismatch",
            Error::NonCommutingSquare => "NonCommutingSquare",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::NegativeOffDiagonal { .. } => "NegativeOffDiagonal",
            Error::ColumnSumNonzero { .. } => "ColumnSumNonzero",
            Error::NotInjective(_) => "NotInjective",
            Error::NotSurjective(_) => "NotSurjective",
            Error::NotBijection(_) => "NotBijection",
            Error::BadWeights(_) => "BadWeights",
            Error::SectionMismatch(_) => "SectionMismatch",
            Error::BoundaryMismatch(_) => "BoundaryMismatch",
            Error::KindMismatch(_) => "KindMismatch",
            Error::InvalidDecoration(_) => "InvalidDecoration",
            Error::InvalidMorphism(_) => "InvalidMorphism",
            Error::SizeLimitExceeded { .. } => "SizeLimitExceeded",
            Error::UnknownSuite(_) => "UnknownSuite",
            Error::UnknownKind(_) => "UnknownKind",
            Error::Parse(_) => "Parse",
        }
    }
}
