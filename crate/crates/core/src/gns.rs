//! Gram matrices of the reduced GNS correspondence.
//!
//! For a CP map `P` on `M_n(ℂ)`, the Hilbert space `F_P` is spanned by
//! vectors `ε_ij` whose inner products are
//!
//! ```text
//!     ⟨ε_ij, ε_kl⟩ = e_j P(e_i* e_k) e_l* = P(e_ik)[j, l] = Σ_r t_r[j,i] · conj(t_r[l,k])
//! ```
//!
//! and the corner space `e₁₁ M_n ⊗_P M_n e₁₁` is spanned by `e_1i ⊗ e_j1` with
//! inner product `tr(b₁* P(a₁* a₂) b₂)`. Both Gram matrices are indexed by
//! pair labels `(i, j) ↦ i·n + j`. They agree entrywise, and their common rank
//! is the index `d(P)`.

use crate::channel::{span_rank, CpMap};
use crate::error::Result;
use crate::numerics::{
    hermitian_eig, numerical_rank, Complex64, ComplexMatrix, RankPolicy, HERMITIAN_TOL,
};

/// Absolute entrywise tolerance for Gram equalities at unit scale.
pub const EQUALITY_TOL_ABS: f64 = 1e-10;
/// Scale-relative fallback for large channels.
pub const EQUALITY_TOL_REL: f64 = 1e-12;

/// Tolerance for entrywise Gram equality: `max(1e−10, 1e−12 · max(1, scale))`.
pub fn equality_tolerance(scale: f64) -> f64 {
    EQUALITY_TOL_ABS.max(EQUALITY_TOL_REL * scale.max(1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    n: usize,
    mat: ComplexMatrix,
}

impl GramMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Pair labels `(i, j)`, 0-based, in storage order.
    pub fn labels(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .collect()
    }

    pub fn index_of(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    /// `⟨(i, j), (k, l)⟩`.
    pub fn entry(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> Complex64 {
        self.mat[(self.index_of(i, j), self.index_of(k, l))]
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn rank(&self, policy: RankPolicy) -> Result<usize> {
        numerical_rank(&self.mat, policy)
    }
}

/// Gram matrix of `{ε_ij}` via the Kraus double sum.
pub fn gram_f(p: &CpMap) -> GramMatrix {
    let n = p.n();
    let dim = n * n;
    let mut mat = ComplexMatrix::zeros(dim, dim);
    for t in p.kraus() {
        for i in 0..n {
            for j in 0..n {
                let left = t[(j, i)];
                for k in 0..n {
                    for l in 0..n {
                        mat[(i * n + j, k * n + l)] += left * t[(l, k)].conj();
                    }
                }
            }
        }
    }
    GramMatrix { n, mat }
}

/// Gram matrix of `{e_1i ⊗ e_j1}` in the corner space, evaluated literally as
/// `tr(b₁* · P(a₁* a₂) · b₂)` with matrix products and a trace.
pub fn gram_corner(p: &CpMap) -> GramMatrix {
    let n = p.n();
    let dim = n * n;
    let unit = |i, j| ComplexMatrix::unit(n, i, j);
    let mut mat = ComplexMatrix::zeros(dim, dim);
    for i in 0..n {
        let a1 = unit(0, i);
        for k in 0..n {
            let a2 = unit(0, k);
            let inner = p.apply(&(&a1.adjoint() * &a2)).expect("square operands");
            for j in 0..n {
                let b1 = unit(j, 0);
                let left = &b1.adjoint() * &inner;
                for l in 0..n {
                    let b2 = unit(l, 0);
                    mat[(i * n + j, k * n + l)] = (&left * &b2).trace();
                }
            }
        }
    }
    GramMatrix { n, mat }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoremOneReport {
    /// `‖gram_F − gram_corner‖∞`.
    pub gram_residual: f64,
    pub tolerance: f64,
    pub rank_f: usize,
    /// Index from the span of the Kraus family.
    pub d_p: usize,
    pub pass: bool,
}

/// Checks `F_P ≅ ℂ^{d(P)}`: the two Gram matrices coincide and their rank
/// equals the span dimension of the Kraus family.
pub fn verify_theorem1(p: &CpMap, policy: RankPolicy) -> Result<TheoremOneReport> {
    let g = gram_f(p);
    let corner = gram_corner(p);
    let gram_residual = g.matrix().max_abs_diff(corner.matrix())?;
    let tolerance = equality_tolerance(g.matrix().max_abs());
    let rank_f = g.rank(policy)?;
    let d_p = span_rank(p, policy)?;
    Ok(TheoremOneReport {
        gram_residual,
        tolerance,
        rank_f,
        d_p,
        pass: gram_residual <= tolerance && rank_f == d_p,
    })
}

/// Explicit isometry `ℂ^d → F_P` in the `ε_ij` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MoritaWitness {
    pub d: usize,
    /// `n² × d`; column `k` is `v_k / √λ_k`.
    pub isometry: ComplexMatrix,
    /// `‖V* G V − I_d‖∞`.
    pub residual: f64,
}

pub fn morita_witness(p: &CpMap, policy: RankPolicy) -> Result<MoritaWitness> {
    let g = gram_f(p);
    let eig = hermitian_eig(g.matrix(), HERMITIAN_TOL)?;
    let d = policy.rank_of(&eig)?;
    let dim = g.matrix().rows();
    let isometry = ComplexMatrix::from_fn(dim, d, |row, k| {
        eig.vectors[(row, k)] / eig.values[k].sqrt()
    });
    let pulled_back = &(&isometry.adjoint() * g.matrix()) * &isometry;
    let residual = pulled_back.max_abs_diff(&ComplexMatrix::identity(d))?;
    Ok(MoritaWitness {
        d,
        isometry,
        residual,
    })
}
