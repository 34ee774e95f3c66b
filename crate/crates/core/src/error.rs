use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("form is not hermitian-symmetric")]
    NotHermitianSymmetric,

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("form is not bihomogeneous")]
    NotBihomogeneous,

    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown variable `{name}` at {position}")]
    UnknownVariable { name: String, position: usize },

    #[error("non-rational literal `{literal}` at {position}")]
    NonRationalLiteral { literal: String, position: usize },

    #[error("odd number of real variables ({0}); symbols live on R^(2n)")]
    OddVariableCount(usize),

    #[error("odd order {0}; principal symbols must have even order")]
    OddOrder(u32),

    #[error("symbol is not complex-bihomogeneous")]
    NotComplexBihomogeneous,

    #[error("symbol is not real-valued")]
    NotRealValued,

    #[error("invalid mode `{0}` (expected strict or semi)")]
    InvalidMode(String),

    #[error("malformed data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
