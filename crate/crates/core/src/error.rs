use thiserror::Error;

/// Errors raised by the quaternionic wavelet toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("quaternion is singular (determinant {det:e} below epsilon {epsilon:e})")]
    SingularQuaternion { det: f64, epsilon: f64 },

    #[error("truncation region produces no quadrature nodes: {0}")]
    EmptyRegion(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),

    #[error("domain mismatch: expected {expected}, found {found}")]
    DomainMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("wavelet is not admissible: {0}")]
    InadmissibleWavelet(String),

    #[error("quadrature mismatch: {0}")]
    QuadratureMismatch(String),

    #[error("coefficient table was produced by a different wavelet")]
    WaveletMismatch,

    #[error("base is not orthonormal on the lattice: max deviation {deviation:e}")]
    NotOrthonormal { deviation: f64 },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
