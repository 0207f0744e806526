//! Dense complex linear algebra used throughout the crate.

mod eigen;
mod matrix;
mod ops;
mod rank;
mod sampling;

pub use eigen::{hermitian_eig, EigenDecomposition, MAX_SWEEPS};
pub use matrix::ComplexMatrix;
pub use ops::{invert_permutation, kronecker, permute_conjugate, validate_permutation};
pub use rank::{numerical_rank, RankPolicy, HERMITIAN_TOL};
pub use sampling::{orthonormalize_columns, ComplexSampler};

pub use num_complex::Complex64;
