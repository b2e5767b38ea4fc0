use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial {poly} is reducible or not square-free; witness factor {witness}")]
    Reducible { poly: String, witness: String },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("chain-map condition fails in degree {degree}")]
    ChainMap { degree: usize },
    #[error("boundary maps do not compose to zero in degree {degree}")]
    NotAComplex { degree: usize },
    #[error("monodromy is not invertible on homology in degree {degree}")]
    NotInvertible { degree: usize },
    #[error("eigenvalue 0 is not allowed (u is a unit)")]
    ZeroEigenvalue,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("integrity violation: {0}")]
    Integrity(String),
}

impl Error {
    pub fn is_integrity(&self) -> bool {
        matches!(self, Error::Integrity(_))
    }
}
