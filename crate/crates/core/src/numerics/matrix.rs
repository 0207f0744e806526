use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix stored row-major.
///
/// Zero-sized shapes are allowed so that an empty isometry (`n x 0`) can be
/// represented without a special case.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// The matrix unit `e_ij` (0-based) of size `n x n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = Complex64::new(1.0, 0.0);
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// Builds a matrix from real row slices; panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    /// Column vector from a slice.
    pub fn column_vector(v: &[Complex64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex64]) {
        assert_eq!(v.len(), self.rows);
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Matrix product, checking inner dimensions.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Entrywise sup-norm `max |a_ij|`; zero for empty matrices.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Entrywise sup-norm of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Entrywise sup-norm of `self - self*`.
    pub fn hermitian_defect(&self) -> f64 {
        assert!(self.is_square());
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "shapes {}x{} and {}x{} differ",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// Operator impls panic on shape mismatch, like slice indexing. Use `matmul`
// for the checked product.

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in add");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sub");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn from_vec_rejects_wrong_length() {
        assert!(matches!(
            ComplexMatrix::from_vec(2, 2, vec![c(0.0, 0.0); 3]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn matmul_small() {
        let a = ComplexMatrix::from_vec(1, 2, vec![c(1.0, 1.0), c(0.0, 2.0)]).unwrap();
        let b = ComplexMatrix::from_vec(2, 1, vec![c(3.0, 0.0), c(1.0, -1.0)]).unwrap();
        // (1+i)*3 + 2i*(1-i) = 3+3i + 2i + 2 = 5+5i
        assert_eq!((&a * &b)[(0, 0)], c(5.0, 5.0));
        assert!(b.matmul(&b).is_err());
    }

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let a = ComplexMatrix::from_vec(1, 2, vec![c(1.0, 2.0), c(3.0, -4.0)]).unwrap();
        let h = a.adjoint();
        assert_eq!(h.shape(), (2, 1));
        assert_eq!(h[(0, 0)], c(1.0, -2.0));
        assert_eq!(h[(1, 0)], c(3.0, 4.0));
    }

    #[test]
    fn unit_products() {
        // e_01 e_10 = e_00 in M_2
        let p = &ComplexMatrix::unit(2, 0, 1) * &ComplexMatrix::unit(2, 1, 0);
        assert_eq!(p, ComplexMatrix::unit(2, 0, 0));
        assert_eq!(p.trace(), c(1.0, 0.0));
    }

    #[test]
    fn empty_shapes_are_allowed() {
        let v = ComplexMatrix::zeros(4, 0);
        assert_eq!(v.shape(), (4, 0));
        assert_eq!(v.max_abs(), 0.0);
        let g = &v.adjoint() * &v;
        assert_eq!(g.shape(), (0, 0));
    }
}
