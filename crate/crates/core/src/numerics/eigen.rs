//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies an ordinary real Jacobi rotation, so the combined
//! 2x2 unitary is
//!
//! ```text
//!     [ c            s          ]
//!     [ -s e^{-iφ}   c e^{-iφ}  ]      a_pq = |a_pq| e^{iφ}
//! ```
//!
//! Sweeps run over all pairs `p < q` in row order until the off-diagonal
//! Frobenius norm falls below `ε · ‖A‖_F`.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Upper bound on full Jacobi sweeps. Convergence is quadratic, so anything
/// near this limit indicates a broken input rather than a slow one.
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Eigenvalues, sorted descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn max_eigenvalue(&self) -> Option<f64> {
        self.values.first().copied()
    }

    pub fn min_eigenvalue(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// `Σ λ_k v_k v_k*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            for i in 0..n {
                let vi = self.vectors[(i, k)] * lambda;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// `tol` bounds the accepted asymmetry: `‖H − H*‖ ≤ tol · max(1, ‖H‖)` in the
/// entrywise sup-norm. The input is symmetrized as `(H + H*)/2` before the
/// iteration starts.
pub fn hermitian_eig(h: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    if !h.is_finite() {
        return Err(Error::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }
    let bound = tol * h.max_abs().max(1.0);
    let asymmetry = h.hermitian_defect();
    if asymmetry > bound {
        return Err(Error::NotHermitian { asymmetry, bound });
    }

    let n = h.rows();
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);

    let fro = a.frobenius_norm();
    let target = f64::EPSILON * fro;
    let mut converged = n <= 1 || fro == 0.0;
    let mut sweeps = 0;
    while !converged {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off_diagonal_norm(&a),
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }
    debug_assert!(converged);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(EigenDecomposition { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase_conj = (apq / b).conj();

    let theta = (aqq - app) / (2.0 * b);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let u00 = Complex64::new(c, 0.0);
    let u01 = Complex64::new(s, 0.0);
    let u10 = phase_conj * -s;
    let u11 = phase_conj * c;

    let n = a.rows();
    // A <- A U
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u00 + akq * u10;
        a[(k, q)] = akp * u01 + akq * u11;
    }
    // A <- U* A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u00.conj() * apk + u10.conj() * aqk;
        a[(q, k)] = u01.conj() * apk + u11.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * b, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * b, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u00 + vkq * u10;
        v[(k, q)] = vkp * u01 + vkq * u11;
    }
}
