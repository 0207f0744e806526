//! Completely positive maps `P(a) = Σ_r t_r a t_r*` on `M_n(ℂ)`.
//!
//! Conventions:
//!
//! * `vec` is row-major: `vec(a)[i·n + j] = a[i, j]`. A superoperator `S`
//!   acts as `vec(P(a)) = S · vec(a)`.
//! * The Choi matrix is `Σ_{i,j} e_ij ⊗ P(e_ij)`, so block `(i, j)` is
//!   `P(e_ij)`. For a Kraus family this equals `Σ_r w_r w_r*` with
//!   `w_r[i·n + k] = t_r[k, i]` (the column-major vec of `t_r`), which is
//!   what [`kraus_from_choi`] inverts.

use crate::error::{Error, Result};
use crate::gns;
use crate::numerics::{hermitian_eig, ComplexMatrix, ComplexSampler, RankPolicy, HERMITIAN_TOL};

/// A completely positive map stored as a Kraus family. An empty family is the
/// zero map.
#[derive(Debug, Clone, PartialEq)]
pub struct CpMap {
    n: usize,
    kraus: Vec<ComplexMatrix>,
}

impl CpMap {
    pub fn new(n: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "matrix size n must be positive".into(),
            ));
        }
        for (r, t) in kraus.iter().enumerate() {
            if t.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {r} is {}x{}, expected {n}x{n}",
                    t.rows(),
                    t.cols()
                )));
            }
            if !t.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "Kraus operator {r} has non-finite entries"
                )));
            }
        }
        Ok(Self { n, kraus })
    }

    pub fn zero(n: usize) -> Self {
        assert!(n > 0);
        Self {
            n,
            kraus: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0);
        Self {
            n,
            kraus: vec![ComplexMatrix::identity(n)],
        }
    }

    /// `a ↦ Σ_i e_ii a e_ii`, the diagonal part of `a`.
    pub fn pinching(n: usize) -> Self {
        assert!(n > 0);
        Self {
            n,
            kraus: (0..n).map(|i| ComplexMatrix::unit(n, i, i)).collect(),
        }
    }

    /// `count` Kraus operators with entries from [`ComplexSampler`] seeded
    /// with `seed`, drawn operator by operator in row-major order.
    pub fn random(n: usize, count: usize, seed: u64) -> Self {
        assert!(n > 0);
        let mut sampler = ComplexSampler::new(seed);
        Self {
            n,
            kraus: (0..count).map(|_| sampler.matrix(n, n)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn kraus_count(&self) -> usize {
        self.kraus.len()
    }

    pub fn into_kraus(self) -> Vec<ComplexMatrix> {
        self.kraus
    }

    /// `Σ_r t_r a t_r*`.
    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.shape() != (self.n, self.n) {
            return Err(Error::DimensionMismatch(format!(
                "map on M_{} applied to a {}x{} matrix",
                self.n,
                a.rows(),
                a.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.n, self.n);
        for t in &self.kraus {
            let tat = &(t * a) * &t.adjoint();
            out = &out + &tat;
        }
        Ok(out)
    }

    /// `P(e_ij)` for the 0-based matrix unit `e_ij`.
    pub fn apply_unit(&self, i: usize, j: usize) -> ComplexMatrix {
        self.apply(&ComplexMatrix::unit(self.n, i, j))
            .expect("matrix unit has the right size")
    }

    /// The Kraus family `t'_s = Σ_r V[s, r] t_r`. For unitary `V` this is the
    /// same map.
    pub fn mix(&self, v: &ComplexMatrix) -> Result<Self> {
        let count = self.kraus.len();
        if v.shape() != (count, count) {
            return Err(Error::DimensionMismatch(format!(
                "mixing matrix is {}x{}, Kraus family has {count} members",
                v.rows(),
                v.cols()
            )));
        }
        let kraus = (0..count)
            .map(|s| {
                let mut acc = ComplexMatrix::zeros(self.n, self.n);
                for (r, t) in self.kraus.iter().enumerate() {
                    acc = &acc + &t.scale(v[(s, r)]);
                }
                acc
            })
            .collect();
        Ok(Self { n: self.n, kraus })
    }

    /// `c·P`, realised by scaling every Kraus operator by `√c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "scale {c} must be finite and non-negative"
            )));
        }
        let root = c.sqrt();
        Ok(Self {
            n: self.n,
            kraus: self.kraus.iter().map(|t| t.scale_real(root)).collect(),
        })
    }

    /// Action matrix with `vec(P(a)) = S · vec(a)`, built column by column from
    /// the matrix units.
    pub fn superoperator(&self) -> ComplexMatrix {
        let n = self.n;
        let mut s = ComplexMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                s.set_column(i * n + j, self.apply_unit(i, j).as_slice());
            }
        }
        s
    }

    /// `‖Σ t_r* t_r − I‖ ≤ tol` (entrywise). Informational only.
    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let mut acc = ComplexMatrix::zeros(self.n, self.n);
        for t in &self.kraus {
            acc = &acc + &(&t.adjoint() * t);
        }
        acc.max_abs_diff(&ComplexMatrix::identity(self.n)).unwrap() <= tol
    }

    /// `‖P(I) − I‖ ≤ tol` (entrywise). Informational only.
    pub fn is_unital(&self, tol: f64) -> bool {
        let image = self.apply(&ComplexMatrix::identity(self.n)).unwrap();
        image
            .max_abs_diff(&ComplexMatrix::identity(self.n))
            .unwrap()
            <= tol
    }
}

/// Row-major vectorization.
pub fn vec_row_major(a: &ComplexMatrix) -> Vec<num_complex::Complex64> {
    a.as_slice().to_vec()
}

/// The `n²×n²` Choi matrix `Σ e_ij ⊗ P(e_ij)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    n: usize,
    mat: ComplexMatrix,
}

impl ChoiMatrix {
    /// Wraps an `n²×n²` matrix; positivity is checked when Kraus operators are
    /// extracted.
    pub fn new(n: usize, mat: ComplexMatrix) -> Result<Self> {
        if n == 0 || mat.shape() != (n * n, n * n) {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix for n = {n} must be {0}x{0}, got {1}x{2}",
                n * n,
                mat.rows(),
                mat.cols()
            )));
        }
        Ok(Self { n, mat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

pub fn choi(p: &CpMap) -> ChoiMatrix {
    let n = p.n();
    let mut mat = ComplexMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let block = p.apply_unit(i, j);
            for k in 0..n {
                for l in 0..n {
                    mat[(i * n + k, j * n + l)] = block[(k, l)];
                }
            }
        }
    }
    ChoiMatrix { n, mat }
}

/// Minimal Kraus family from a Choi matrix: one operator `√λ_k · unvec(v_k)`
/// per eigenvalue above the rank threshold.
pub fn kraus_from_choi(c: &ChoiMatrix, policy: RankPolicy) -> Result<CpMap> {
    let n = c.n;
    let eig = hermitian_eig(&c.mat, HERMITIAN_TOL)?;
    let rank = policy.rank_of(&eig)?;
    let kraus = (0..rank)
        .map(|k| {
            let root = eig.values[k].sqrt();
            ComplexMatrix::from_fn(n, n, |row, col| eig.vectors[(col * n + row, k)] * root)
        })
        .collect();
    CpMap::new(n, kraus)
}

/// Builds a CP map from its action matrix on row-major `vec`.
///
/// Fails with [`Error::NotCp`] when the induced Choi matrix has an eigenvalue
/// below `-τ`.
pub fn from_superoperator(s: &ComplexMatrix, policy: RankPolicy) -> Result<CpMap> {
    let dim = s.rows();
    let n = (dim as f64).sqrt().round() as usize;
    if !s.is_square() || n * n != dim || n == 0 {
        return Err(Error::DimensionMismatch(format!(
            "superoperator must be n²×n², got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    // P(e_ij)[k, l] = S[k·n + l, i·n + j] lands at Choi[i·n + k, j·n + l].
    let mut mat = ComplexMatrix::zeros(dim, dim);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    mat[(i * n + k, j * n + l)] = s[(k * n + l, i * n + j)];
                }
            }
        }
    }
    let c = ChoiMatrix::new(n, mat)?;
    match kraus_from_choi(&c, policy) {
        Err(Error::NotPsd {
            eigenvalue,
            threshold,
        }) => Err(Error::NotCp {
            eigenvalue,
            threshold,
        }),
        // a non-Hermitian Choi matrix cannot come from a CP map either
        Err(Error::NotHermitian { .. }) => Err(Error::NotCp {
            eigenvalue: f64::NAN,
            threshold: HERMITIAN_TOL,
        }),
        other => other,
    }
}

/// Index `d(P)` computed three ways.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexReport {
    /// Dimension of the linear span of the Kraus operators.
    pub d_span: usize,
    /// Rank of the Choi matrix.
    pub d_choi: usize,
    /// Rank of the Gram matrix of `F_P`.
    pub d_gram: usize,
    pub agree: bool,
}

impl IndexReport {
    pub fn new(d_span: usize, d_choi: usize, d_gram: usize) -> Self {
        Self {
            d_span,
            d_choi,
            d_gram,
            agree: d_span == d_choi && d_choi == d_gram,
        }
    }
}

/// Dimension of `span{t_r}`: rank of `Σ_r conj(vec t_r) vec(t_r)ᵀ`, the
/// `n²×n²` Gram of the stacked row-major vectorizations.
pub fn span_rank(p: &CpMap, policy: RankPolicy) -> Result<usize> {
    let dim = p.n() * p.n();
    let mut gram = ComplexMatrix::zeros(dim, dim);
    for t in p.kraus() {
        let v = vec_row_major(t);
        for a in 0..dim {
            let va = v[a].conj();
            for b in 0..dim {
                gram[(a, b)] += va * v[b];
            }
        }
    }
    crate::numerics::numerical_rank(&gram, policy)
}

pub fn index(p: &CpMap, policy: RankPolicy) -> Result<IndexReport> {
    let d_span = span_rank(p, policy)?;
    let d_choi = crate::numerics::numerical_rank(choi(p).matrix(), policy)?;
    let d_gram = gns::gram_f(p).rank(policy)?;
    Ok(IndexReport::new(d_span, d_choi, d_gram))
}
