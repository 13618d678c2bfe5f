use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("{line}:{col}: syntax error: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("undeclared identifier `{0}`")]
    Undeclared(String),
    #[error("bidegree violation: {0}")]
    Bidegree(String),
    #[error("metric is not Hermitian: {0}")]
    NonHermitian(String),
    #[error("no value assigned to `{0}`")]
    MissingAssignment(String),
    #[error("assignment for `{0}` is inconsistent with its conjugate")]
    InconsistentConjugate(String),
    #[error("real variable `{0}` received a non-real value")]
    NotReal(String),
    #[error("metric is not positive definite")]
    NotPositiveDefinite,
    #[error("singular system: {0}")]
    Singular(String),
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("{line}:{col}: {inner}")]
    Located {
        line: usize,
        col: usize,
        inner: Box<Error>,
    },
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
}

pub type Result<T> = std::result::Result<T, Error>;
