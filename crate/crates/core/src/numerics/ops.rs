use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Kronecker product: `(A⊗B)[i·r_B + k, j·c_B + l] = A[i,j]·B[k,l]`.
pub fn kronecker(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[(i, j)];
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Checks that `sigma` is a permutation of `0..sigma.len()`.
pub fn validate_permutation(sigma: &[usize]) -> Result<()> {
    let mut seen = vec![false; sigma.len()];
    for &s in sigma {
        if s >= sigma.len() || std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidArgument(format!(
                "not a permutation of 0..{}",
                sigma.len()
            )));
        }
    }
    Ok(())
}

pub fn invert_permutation(sigma: &[usize]) -> Result<Vec<usize>> {
    validate_permutation(sigma)?;
    let mut inv = vec![0; sigma.len()];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    Ok(inv)
}

/// Relabels the basis: `result[σ(i), σ(j)] = H[i, j]`.
///
/// This is `P H Pᵀ` for the permutation matrix `P` with `P[σ(i), i] = 1`, so
/// spectrum and rank are unchanged.
pub fn permute_conjugate(h: &ComplexMatrix, sigma: &[usize]) -> Result<ComplexMatrix> {
    if !h.is_square() || h.rows() != sigma.len() {
        return Err(Error::DimensionMismatch(format!(
            "permutation of length {} applied to a {}x{} matrix",
            sigma.len(),
            h.rows(),
            h.cols()
        )));
    }
    validate_permutation(sigma)?;
    let n = h.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(sigma[i], sigma[j])] = h[(i, j)];
        }
    }
    Ok(out)
}
