use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds {bound:e}")]
    NotHermitian { asymmetry: f64, bound: f64 },

    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below -{threshold:e}")]
    NotPsd { eigenvalue: f64, threshold: f64 },

    #[error("map is not completely positive: Choi eigenvalue {eigenvalue:e} below -{threshold:e}")]
    NotCp { eigenvalue: f64, threshold: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
