use thiserror::Error;

use crate::matcore::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("field mismatch: expected {expected:?}, found {found:?}")]
    FieldMismatch { expected: Field, found: Field },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("real-mode matrix has a nonzero imaginary part")]
    ImaginaryInRealMode,

    #[error("matrix is not skew-Hermitian (deviation {0:e})")]
    NotSkewHermitian(f64),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("real-mode matrix has determinant {0}, expected +1")]
    NotSpecial(f64),

    #[error("columns are not orthonormal (deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("not a rank-k Hermitian projector: {0}")]
    NotProjector(String),

    #[error("k = {k} is out of range for n = {n}")]
    KOutOfRange { n: usize, k: usize },

    #[error("not a Stiefel tangent vector: lower-right block has norm {0:e}")]
    NotStiefelTangent(f64),

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("velocity is zero")]
    ZeroVelocity,

    #[error("outside the scope of the dimension condition: {0}")]
    OutOfScope(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("velocity grid is empty")]
    EmptyGrid,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by a numerical invariant (as opposed to bad input shape or IO).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonFinite
                | Error::ImaginaryInRealMode
                | Error::NotSkewHermitian(_)
                | Error::NotUnitary(_)
                | Error::NotSpecial(_)
                | Error::NotOrthonormal(_)
                | Error::NotProjector(_)
        )
    }
}
