//! Dense complex matrices at desk scale.
//!
//! Everything here is written for matrices with at most a few hundred rows:
//! Cholesky factors, triangular solves, LU determinants and a Jacobi
//! eigenvalue routine for Hermitian matrices. Storage is row-major.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Pivot threshold used for every positive-definiteness decision.
pub const PIVOT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![C64::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// The anti-diagonal symmetry: ones on the anti-diagonal.
    pub fn exchange(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, n - 1 - i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Builds a matrix from row-major data. Panics if the length is wrong.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has wrong length");
        CMatrix { rows, cols, data }
    }

    pub fn scalar(c: C64) -> Self {
        CMatrix { rows: 1, cols: 1, data: vec![c] }
    }

    pub fn column_vector(v: &[C64]) -> Self {
        CMatrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn row_vector(v: &[C64]) -> Self {
        CMatrix { rows: 1, cols: v.len(), data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: C64) -> Self {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> Vec<C64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    /// Copy of the block with rows `r0..r1` and columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Principal submatrix on the index range `lo..=hi`.
    pub fn principal(&self, lo: usize, hi: usize) -> Self {
        self.submatrix(lo, hi + 1, lo, hi + 1)
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &CMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &CMatrix) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    /// `copies` diagonal copies of `self`.
    pub fn block_diag_repeat(&self, copies: usize) -> Self {
        let mut m = Self::zeros(self.rows * copies, self.cols * copies);
        for c in 0..copies {
            m.set_block(c * self.rows, c * self.cols, self);
        }
        m
    }

    /// Horizontal concatenation. Panics if row counts differ.
    pub fn hcat(blocks: &[CMatrix]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let mut c0 = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hcat: row counts differ");
            m.set_block(0, c0, b);
            c0 += b.cols;
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "matvec: length mismatch");
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Hermitian part of the deviation `max |a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.rows.min(self.cols) {
            for j in 0..=i {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul: inner dimensions differ");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "add: shapes differ");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "sub: shapes differ");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Lower Cholesky factor `L` with `A = L L*` and positive diagonal.
///
/// Fails when a pivot drops to `PIVOT_TOL` or below; the index reported is
/// the first leading principal minor that is not positive.
pub fn cholesky(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows, found: a.cols });
    }
    let n = a.rows;
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut diag = a[(j, j)].re;
        for k in 0..j {
            diag -= l[(j, k)].norm_sqr();
        }
        if diag.is_nan() || diag <= PIVOT_TOL {
            return Err(Error::NotPositiveDefinite { index: j, pivot: diag });
        }
        let djj = diag.sqrt();
        l[(j, j)] = C64::new(djj, 0.0);
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// Solves `L x = b` for lower-triangular `L`.
pub fn forward_substitute(l: &CMatrix, b: &[C64]) -> Vec<C64> {
    let n = b.len();
    let mut x = vec![C64::zero(); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    x
}

/// Solves `U x = b` for upper-triangular `U`.
pub fn back_substitute(u: &CMatrix, b: &[C64]) -> Vec<C64> {
    let n = b.len();
    let mut x = vec![C64::zero(); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= u[(i, k)] * x[k];
        }
        x[i] = s / u[(i, i)];
    }
    x
}

/// Inverse of an upper-triangular matrix.
pub fn upper_triangular_inverse(u: &CMatrix) -> CMatrix {
    let n = u.rows;
    let mut inv = CMatrix::zeros(n, n);
    let mut e = vec![C64::zero(); n];
    for j in 0..n {
        e.iter_mut().for_each(|x| *x = C64::zero());
        e[j] = C64::new(1.0, 0.0);
        let col = back_substitute(u, &e);
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    inv
}

/// Inverse of a lower-triangular matrix.
pub fn lower_triangular_inverse(l: &CMatrix) -> CMatrix {
    let n = l.rows;
    let mut inv = CMatrix::zeros(n, n);
    let mut e = vec![C64::zero(); n];
    for j in 0..n {
        e.iter_mut().for_each(|x| *x = C64::zero());
        e[j] = C64::new(1.0, 0.0);
        let col = forward_substitute(l, &e);
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    inv
}

/// Determinant by LU with partial pivoting.
pub fn determinant(a: &CMatrix) -> C64 {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows;
    let mut m = a.clone();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        let mut piv = col;
        let mut best = m[(col, col)].norm();
        for r in col + 1..n {
            let v = m[(r, col)].norm();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return C64::zero();
        }
        if piv != col {
            for c in 0..n {
                let tmp = m[(col, c)];
                m[(col, c)] = m[(piv, c)];
                m[(piv, c)] = tmp;
            }
            det = -det;
        }
        let p = m[(col, col)];
        det *= p;
        for r in col + 1..n {
            let factor = m[(r, col)] / p;
            if factor.is_zero() {
                continue;
            }
            for c in col..n {
                let v = m[(col, c)];
                m[(r, c)] -= factor * v;
            }
        }
    }
    det
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The `n×n` Hermitian `X + iY` is embedded as the real symmetric
/// `[[X, -Y], [Y, X]]`, whose spectrum is that of the original with every
/// eigenvalue doubled; cyclic Jacobi sweeps diagonalize the embedding.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    assert!(a.is_square(), "eigenvalues of a non-square matrix");
    let n = a.rows;
    if n == 0 {
        return Vec::new();
    }
    let m = 2 * n;
    let mut s = vec![0.0_f64; m * m];
    for i in 0..n {
        for j in 0..n {
            // symmetrize against round-off in the input
            let h = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            s[i * m + j] = h.re;
            s[(i + n) * m + (j + n)] = h.re;
            s[i * m + (j + n)] = -h.im;
            s[(i + n) * m + j] = h.im;
        }
    }
    jacobi_symmetric(&mut s, m);
    let mut eig: Vec<f64> = (0..m).map(|i| s[i * m + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));
    eig.into_iter().step_by(2).collect()
}

fn jacobi_symmetric(a: &mut [f64], n: usize) {
    for _sweep in 0..100 {
        let mut off = 0.0;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                let v = a[i * n + j] * a[i * n + j];
                total += v;
                if i != j {
                    off += v;
                }
            }
        }
        if off <= 1e-32 * total || off == 0.0 {
            return;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
}

/// Largest singular value.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.rows == 0 || a.cols == 0 {
        return 0.0;
    }
    let gram = if a.rows <= a.cols { a * &a.adjoint() } else { &a.adjoint() * a };
    hermitian_eigenvalues(&gram).last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Numerical rank: singular values above `rel_tol` times the largest.
pub fn rank(a: &CMatrix, rel_tol: f64) -> usize {
    if a.rows == 0 || a.cols == 0 {
        return 0;
    }
    let gram = if a.rows <= a.cols { a * &a.adjoint() } else { &a.adjoint() * a };
    let eig = hermitian_eigenvalues(&gram);
    let top = eig.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return 0;
    }
    eig.iter().filter(|&&e| e > rel_tol * rel_tol * top).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn determinant_of_small_matrices() {
        let a = CMatrix::from_vec(2, 2, vec![c(1.0), c(0.6), c(0.6), c(1.0)]);
        assert!((determinant(&a) - c(0.64)).norm() < 1e-15);
        let p = CMatrix::exchange(3);
        assert!((determinant(&p) - c(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = CMatrix::from_vec(2, 2, vec![c(1.0), c(1.0), c(1.0), c(1.0)]);
        assert!(matches!(cholesky(&a), Err(Error::NotPositiveDefinite { index: 1, .. })));
    }

    #[test]
    fn eigenvalues_of_complex_hermitian() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let a = CMatrix::from_vec(2, 2, vec![c(2.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), c(2.0)]);
        let e = hermitian_eigenvalues(&a);
        assert!((e[0] - 1.0).abs() < 1e-13 && (e[1] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn spectral_norm_and_rank() {
        let a = CMatrix::from_vec(2, 3, vec![c(3.0), c(0.0), c(0.0), c(0.0), c(4.0), c(0.0)]);
        assert!((spectral_norm(&a) - 4.0).abs() < 1e-13);
        assert_eq!(rank(&a, 1e-10), 2);
        assert_eq!(rank(&CMatrix::zeros(3, 3), 1e-10), 0);
    }
}
