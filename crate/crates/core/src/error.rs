use thiserror::Error;

/// Errors produced by the kernel, the channel models and the Choi tooling.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vector length {0} is not a perfect square")]
    NotPerfectSquare(usize),

    #[error("matrix data of length {len} cannot form a {dim}x{dim} matrix")]
    BadShape { len: usize, dim: usize },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is {0} (expected 1)")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("map is not linear (deviation {0:e})")]
    NonLinear(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
