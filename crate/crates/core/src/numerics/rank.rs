use super::eigen::{hermitian_eig, EigenDecomposition};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Accepted asymmetry (relative, entrywise) for matrices handed to the rank
/// routines. Gram and Choi matrices are Hermitian up to rounding only.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Threshold rule separating numerically zero eigenvalues from the rest.
///
/// The default is `τ = dim · ε · max(λ_max, 1)`; `absolute` replaces it with a
/// fixed threshold.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RankPolicy {
    pub absolute: Option<f64>,
}

impl RankPolicy {
    pub fn relative() -> Self {
        Self { absolute: None }
    }

    pub fn absolute(threshold: f64) -> Self {
        Self {
            absolute: Some(threshold),
        }
    }

    pub fn threshold(&self, dim: usize, lambda_max: f64) -> f64 {
        match self.absolute {
            Some(t) => t,
            None => dim as f64 * f64::EPSILON * lambda_max.max(1.0),
        }
    }

    /// Threshold for a computed decomposition.
    pub fn threshold_for(&self, eig: &EigenDecomposition) -> f64 {
        self.threshold(eig.dim(), eig.max_eigenvalue().unwrap_or(0.0))
    }

    /// Counts eigenvalues above the threshold, rejecting any below `-τ`.
    pub fn rank_of(&self, eig: &EigenDecomposition) -> Result<usize> {
        let tau = self.threshold_for(eig);
        if let Some(min) = eig.min_eigenvalue() {
            if min < -tau {
                return Err(Error::NotPsd {
                    eigenvalue: min,
                    threshold: tau,
                });
            }
        }
        Ok(eig.values.iter().filter(|&&l| l > tau).count())
    }
}

/// Numerical rank of a Hermitian positive semidefinite matrix.
pub fn numerical_rank(h: &ComplexMatrix, policy: RankPolicy) -> Result<usize> {
    let eig = hermitian_eig(h, HERMITIAN_TOL)?;
    policy.rank_of(&eig)
}
