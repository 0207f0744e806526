//! The two-step correspondence `M_n ⊗_{P₁} M_n ⊗_{P₂} M_n` and its reduced
//! Hilbert space `F_{P₁P₂}`.
//!
//! `F_{P₁P₂}` is spanned by `ε_iklj = e_j ⊗ I ⊗ e_kl ⊗ I ⊗ e_i*` with inner
//! product `η₁* P₂(a* P₁(ξ₁* ξ₂) b) η₂`. Quadruple labels `(i, k, l, j)` are
//! stored at `((i·n + k)·n + l)·n + j`.
//!
//! Expanding `e_lk · M · e_ph = M[k, p] · e_lh` gives the closed form
//!
//! ```text
//!     ⟨ε_iklj, ε_mphq⟩ = P₁(e_jq)[k, p] · P₂(e_lh)[i, m]
//!                      = G₁[(j,k), (q,p)] · G₂[(l,i), (h,m)]
//! ```
//!
//! so `G₁₂` is the Kronecker product `G₁ ⊗ G₂` after relabeling the quadruple
//! `(i, k, l, j)` as the pair of pairs `((j, k), (l, i))`.

use crate::channel::{span_rank, CpMap};
use crate::error::{Error, Result};
use crate::gns::{equality_tolerance, gram_f};
use crate::numerics::{
    invert_permutation, kronecker, numerical_rank, permute_conjugate, Complex64, ComplexMatrix,
    RankPolicy,
};

/// Quadruple label `(i, k, l, j)`, 0-based.
pub type Quad = (usize, usize, usize, usize);

pub fn quad_index(n: usize, (i, k, l, j): Quad) -> usize {
    ((i * n + k) * n + l) * n + j
}

pub fn quad_label(n: usize, idx: usize) -> Quad {
    let j = idx % n;
    let l = (idx / n) % n;
    let k = (idx / (n * n)) % n;
    let i = idx / (n * n * n);
    (i, k, l, j)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoStepGram {
    n: usize,
    mat: ComplexMatrix,
}

impl TwoStepGram {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> Vec<Quad> {
        (0..self.mat.rows())
            .map(|x| quad_label(self.n, x))
            .collect()
    }

    pub fn entry(&self, row: Quad, col: Quad) -> Complex64 {
        self.mat[(quad_index(self.n, row), quad_index(self.n, col))]
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

fn check_same_n(p1: &CpMap, p2: &CpMap) -> Result<usize> {
    if p1.n() != p2.n() {
        return Err(Error::DimensionMismatch(format!(
            "maps act on M_{} and M_{}",
            p1.n(),
            p2.n()
        )));
    }
    Ok(p1.n())
}

fn row_vector(n: usize, j: usize) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(1, n);
    v[(0, j)] = Complex64::new(1.0, 0.0);
    v
}

/// Gram matrix of `{ε_iklj}` evaluated literally from the inner-product
/// formula with `ξ = e_j` (row vector), `a = e_kl`, `η = e_i*` (column).
pub fn gram_two_step(p1: &CpMap, p2: &CpMap) -> Result<TwoStepGram> {
    let n = check_same_n(p1, p2)?;
    let dim = n.pow(4);
    let rows: Vec<ComplexMatrix> = (0..n).map(|j| row_vector(n, j)).collect();
    let cols: Vec<ComplexMatrix> = rows.iter().map(ComplexMatrix::adjoint).collect();

    let mut mat = ComplexMatrix::zeros(dim, dim);
    for j in 0..n {
        for q in 0..n {
            // P₁(ξ₁* ξ₂)
            let first = p1.apply(&(&rows[j].adjoint() * &rows[q]))?;
            for k in 0..n {
                for l in 0..n {
                    let a_adj = ComplexMatrix::unit(n, k, l).adjoint();
                    let left = &a_adj * &first;
                    for p in 0..n {
                        for h in 0..n {
                            let b = ComplexMatrix::unit(n, p, h);
                            let second = p2.apply(&(&left * &b))?;
                            for (i, eta1) in cols.iter().enumerate() {
                                // η₁* = (e_i*)* = e_i
                                let top = &eta1.adjoint() * &second;
                                for (m, eta2) in cols.iter().enumerate() {
                                    let value = (&top * eta2)[(0, 0)];
                                    let r = quad_index(n, (i, k, l, j));
                                    let c = quad_index(n, (m, p, h, q));
                                    mat[(r, c)] = value;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(TwoStepGram { n, mat })
}

/// Closed-form entry `P₁(e_jq)[k, p] · P₂(e_lh)[i, m]`.
pub fn two_step_entry_closed_form(
    p1: &CpMap,
    p2: &CpMap,
    row: Quad,
    col: Quad,
) -> Result<Complex64> {
    check_same_n(p1, p2)?;
    let (i, k, l, j) = row;
    let (m, p, h, q) = col;
    Ok(p1.apply_unit(j, q)[(k, p)] * p2.apply_unit(l, h)[(i, m)])
}

/// Position in `G₁ ⊗ G₂` of each quadruple label: `(i, k, l, j)` goes to the
/// pair of pairs `((j, k), (l, i))`, i.e. `(j·n + k)·n² + l·n + i`.
pub fn factorization_map(n: usize) -> Vec<usize> {
    let n2 = n * n;
    (0..n2 * n2)
        .map(|x| {
            let (i, k, l, j) = quad_label(n, x);
            (j * n + k) * n2 + (l * n + i)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorizationReport {
    /// `‖G₁₂ − σ(G₁ ⊗ G₂)‖∞`.
    pub residual: f64,
    pub tolerance: f64,
    pub rank_12: usize,
    pub d1: usize,
    pub d2: usize,
    pub pass: bool,
}

/// Checks `F_{P₁P₂} ≅ F_{P₁} ⊗ F_{P₂}` and `dim F_{P₁P₂} = d(P₁)·d(P₂)`.
pub fn verify_factorization(
    p1: &CpMap,
    p2: &CpMap,
    policy: RankPolicy,
) -> Result<FactorizationReport> {
    let n = check_same_n(p1, p2)?;
    let g1 = gram_f(p1);
    let g2 = gram_f(p2);
    let g12 = gram_two_step(p1, p2)?;
    let kron = kronecker(g1.matrix(), g2.matrix());
    // permute_conjugate places row x at sigma[x]; send Kronecker positions
    // back to quadruple positions.
    let sigma = invert_permutation(&factorization_map(n))?;
    let relabeled = permute_conjugate(&kron, &sigma)?;
    let residual = g12.matrix().max_abs_diff(&relabeled)?;
    let tolerance = equality_tolerance(g12.matrix().max_abs());
    let rank_12 = numerical_rank(g12.matrix(), policy)?;
    let d1 = span_rank(p1, policy)?;
    let d2 = span_rank(p2, policy)?;
    Ok(FactorizationReport {
        residual,
        tolerance,
        rank_12,
        d1,
        d2,
        pass: residual <= tolerance && rank_12 == d1 * d2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quad_index_round_trip() {
        for n in 1usize..=3 {
            for x in 0..n.pow(4) {
                assert_eq!(quad_index(n, quad_label(n, x)), x);
            }
        }
        assert_eq!(quad_index(2, (1, 0, 1, 1)), 8 + 2 + 1);
    }

    #[test]
    fn factorization_map_is_permutation() {
        for n in 1..=3 {
            crate::numerics::validate_permutation(&factorization_map(n)).unwrap();
        }
    }

    #[test]
    fn identity_pair() {
        let id = CpMap::identity(2);
        assert_eq!(
            numerical_rank(
                gram_two_step(&id, &id).unwrap().matrix(),
                RankPolicy::default()
            )
            .unwrap(),
            1
        );
        let r = verify_factorization(&id, &id, RankPolicy::default()).unwrap();
        assert!(r.pass);
        assert!(r.residual <= 1e-12);
        assert_eq!(r.rank_12, 1);
    }

    #[test]
    fn pinching_pair() {
        let p = CpMap::pinching(2);
        let r = verify_factorization(&p, &p, RankPolicy::default()).unwrap();
        assert!(r.pass);
        assert_eq!((r.rank_12, r.d1, r.d2), (4, 2, 2));
    }

    #[test]
    fn random_pair() {
        let r = verify_factorization(
            &CpMap::random(2, 2, 1),
            &CpMap::random(2, 3, 2),
            RankPolicy::default(),
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.rank_12, 6);
        assert!(r.residual <= 1e-10);
    }

    #[test]
    fn zero_map_absorbs() {
        let g = gram_two_step(&CpMap::zero(2), &CpMap::random(2, 2, 3)).unwrap();
        assert_eq!(g.matrix().max_abs(), 0.0);
        let r = verify_factorization(
            &CpMap::zero(2),
            &CpMap::random(2, 2, 3),
            RankPolicy::default(),
        )
        .unwrap();
        assert!(r.pass);
        assert_eq!(r.rank_12, 0);
    }

    #[test]
    fn mismatched_sizes() {
        assert!(matches!(
            gram_two_step(&CpMap::identity(2), &CpMap::identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(verify_factorization(
            &CpMap::identity(2),
            &CpMap::identity(3),
            RankPolicy::default()
        )
        .is_err());
    }

    #[test]
    fn closed_form_matches_literal_on_sample() {
        let p1 = CpMap::random(2, 2, 10);
        let p2 = CpMap::random(2, 3, 11);
        let g = gram_two_step(&p1, &p2).unwrap();
        for x in [0, 5, 9, 15] {
            for y in [0, 3, 12, 15] {
                let (r, c) = (quad_label(2, x), quad_label(2, y));
                let closed = two_step_entry_closed_form(&p1, &p2, r, c).unwrap();
                assert!((closed - g.entry(r, c)).norm() <= 1e-12);
            }
        }
    }
}
