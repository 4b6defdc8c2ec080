//! Cholesky factors, inverse-factor columns and the rotation factorization of
//! a unit-diagonal positive-definite chain matrix.
//!
//! Indices are 0-based throughout: `A^{(i,j)}` is the principal block on
//! `i..=j`, `r(i, j)` the parameter of the pair `i < j`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::kernel::partial_correlation_row;
use crate::linalg::{self, CMatrix, C64};

/// Hermitian positive-definite matrix with unit diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMatrix(CMatrix);

impl ChainMatrix {
    pub fn new(t: CMatrix) -> Result<Self> {
        if !t.is_square() {
            return Err(Error::DimensionMismatch { expected: t.rows(), found: t.cols() });
        }
        if t.hermitian_defect() > 1e-12 {
            return Err(Error::Domain("chain matrix must be Hermitian"));
        }
        if (0..t.rows()).any(|k| (t[(k, k)] - C64::new(1.0, 0.0)).norm() > 1e-12) {
            return Err(Error::Domain("chain matrix must have unit diagonal"));
        }
        linalg::cholesky(&t)?;
        Ok(ChainMatrix(t))
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    /// The principal block on `i..=j`.
    pub fn window(&self, i: usize, j: usize) -> CMatrix {
        self.0.principal(i, j)
    }
}

/// Parameters `r(i, j)` for `i < j` of a chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainParams {
    n: usize,
    rows: Vec<Vec<C64>>,
}

impl ChainParams {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn r(&self, i: usize, j: usize) -> C64 {
        assert!(i < j && j < self.n, "parameter index out of range");
        self.rows[i][j - i - 1]
    }

    pub fn rho(&self, i: usize, j: usize) -> f64 {
        (1.0 - self.r(i, j).norm_sqr()).sqrt()
    }

    /// `r(i, i+1), …, r(i, j)`.
    pub fn run(&self, i: usize, j: usize) -> &[C64] {
        &self.rows[i][..j - i]
    }

    /// `Π_{i<j} (1 - |r(i, j)|²)`, the determinant of the chain matrix.
    pub fn determinant(&self) -> f64 {
        self.rows.iter().flatten().map(|r| 1.0 - r.norm_sqr()).product()
    }
}

/// `F` upper triangular with positive diagonal and `A = F* F`.
pub fn upper_cholesky(a: &CMatrix) -> Result<CMatrix> {
    Ok(linalg::cholesky(a)?.adjoint())
}

/// `G` lower triangular with positive diagonal and `A = G* G`, obtained as
/// `𝒥 F̃ 𝒥` where `F̃` is the upper factor of `𝒥 A 𝒥`.
pub fn lower_cholesky(a: &CMatrix) -> Result<CMatrix> {
    let j = CMatrix::exchange(a.rows());
    let flipped = &(&j * a) * &j;
    let f = upper_cholesky(&flipped)?;
    Ok(&(&j * &f) * &j)
}

pub fn chain_params(a: &ChainMatrix) -> Result<ChainParams> {
    let n = a.size();
    let rows = (0..n).map(|i| partial_correlation_row(a.matrix(), i)).collect::<Result<Vec<_>>>()?;
    Ok(ChainParams { n, rows })
}

fn rhos(r: &[C64]) -> Vec<f64> {
    r.iter().map(|x| (1.0 - x.norm_sqr()).sqrt()).collect()
}

/// Row `L({r_k}) = [r_1, ρ_1 r_2, ρ_1 ρ_2 r_3, …]`.
pub fn l_row(r: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(r.len());
    let mut prefix = 1.0;
    for (x, rho) in r.iter().zip(rhos(r)) {
        out.push(x * prefix);
        prefix *= rho;
    }
    out
}

/// Column `K({r_k}) = [conj(r_1) ρ_2⋯ρ_m, …, conj(r_{m-1}) ρ_m, conj(r_m)]`.
pub fn k_column(r: &[C64]) -> Vec<C64> {
    let rho = rhos(r);
    let mut out = vec![C64::zero(); r.len()];
    let mut suffix = 1.0;
    for k in (0..r.len()).rev() {
        out[k] = r[k].conj() * suffix;
        suffix *= rho[k];
    }
    out
}

/// Upper-triangular `D({r_k})`: `D_1 = [ρ_1]`, then
/// `D_m = [[D_{m-1}, -K_{m-1} r_m], [0, ρ_m]]`.
pub fn d_matrix(r: &[C64]) -> CMatrix {
    let m = r.len();
    let rho = rhos(r);
    let mut d = CMatrix::zeros(m, m);
    for col in 0..m {
        let kcol = k_column(&r[..col]);
        for (row, k) in kcol.iter().enumerate() {
            d[(row, col)] = -k * r[col];
        }
        d[(col, col)] = C64::new(rho[col], 0.0);
    }
    d
}

pub fn build_l(p: &ChainParams, i: usize, j: usize) -> Vec<C64> {
    l_row(p.run(i, j))
}

pub fn build_k(p: &ChainParams, i: usize, j: usize) -> Vec<C64> {
    k_column(p.run(i, j))
}

pub fn build_d(p: &ChainParams, i: usize, j: usize) -> CMatrix {
    d_matrix(p.run(i, j))
}

/// Column `C_j^{(i)}`: entry for `k = j-1, …, i` is `r(k, j) ρ(k+1, j)⋯ρ(j-1, j)`.
pub fn build_c(p: &ChainParams, i: usize, j: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(j - i);
    let mut tail = 1.0;
    for k in (i..j).rev() {
        out.push(p.r(k, j) * tail);
        tail *= p.rho(k, j);
    }
    out
}

/// Last column of `F_{i,j}⁻¹`.
pub fn p_col(a: &ChainMatrix, i: usize, j: usize) -> Result<Vec<C64>> {
    let f = upper_cholesky(&a.window(i, j))?;
    let mut e = vec![C64::zero(); j - i + 1];
    e[j - i] = C64::new(1.0, 0.0);
    Ok(linalg::back_substitute(&f, &e))
}

/// First column of `G_{i,j}⁻¹`.
pub fn psharp_col(a: &ChainMatrix, i: usize, j: usize) -> Result<Vec<C64>> {
    let g = lower_cholesky(&a.window(i, j))?;
    let mut e = vec![C64::zero(); j - i + 1];
    e[0] = C64::new(1.0, 0.0);
    Ok(linalg::forward_substitute(&g, &e))
}

/// Elementary rotation of size `size` acting on coordinates `q, q+1`.
fn elementary(size: usize, q: usize, r: C64) -> CMatrix {
    let rho = C64::new((1.0 - r.norm_sqr()).sqrt(), 0.0);
    let mut m = CMatrix::identity(size);
    m[(q, q)] = r;
    m[(q, q + 1)] = rho;
    m[(q + 1, q)] = rho;
    m[(q + 1, q + 1)] = -r.conj();
    m
}

/// `U_{i,j} = R_{i,j} (U_{i+1,j} ⊕ 1)` with `R_{i,j}` the ordered product of
/// the elementary rotations for `r(i, i+1), …, r(i, j)`. `U_{j,j} = [1]`.
pub fn rotation_u(p: &ChainParams, i: usize, j: usize) -> CMatrix {
    let size = j - i + 1;
    if size == 1 {
        return CMatrix::identity(1);
    }
    let mut r_ij = CMatrix::identity(size);
    for (q, r) in p.run(i, j).iter().enumerate() {
        r_ij = &r_ij * &elementary(size, q, *r);
    }
    let inner = rotation_u(p, i + 1, j).direct_sum(&CMatrix::identity(1));
    &r_ij * &inner
}

/// Residuals of the two inverse-factor recursions and of `U 𝒥 G = F`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct IdentityResiduals {
    pub p_recursion: f64,
    pub p_sharp_recursion: f64,
    pub rotation: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.p_recursion.max(self.p_sharp_recursion).max(self.rotation)
    }
}

/// Checks, on every window `i < j` of the chain,
///
/// `P_{i,j} = (1/ρ)[0; P_{i+1,j}] - (r/ρ)[P♯_{i,j-1}; 0]`,
/// `P♯_{i,j} = -(conj(r)/ρ)[0; P_{i+1,j}] + (1/ρ)[P♯_{i,j-1}; 0]`,
///
/// with `r = r(i, j)`, and `U_{i,j} 𝒥 G_{i,j} = F_{i,j}` on every window.
pub fn verify_identities(a: &ChainMatrix) -> Result<IdentityResiduals> {
    let n = a.size();
    if n < 2 {
        return Err(Error::Domain("identities need a chain of size at least 2"));
    }
    let params = chain_params(a)?;
    let mut res = IdentityResiduals::default();
    for i in 0..n {
        for j in i + 1..n {
            let r = params.r(i, j);
            let rho = params.rho(i, j);
            let p = p_col(a, i, j)?;
            let psharp = psharp_col(a, i, j)?;
            let p_inner = p_col(a, i + 1, j)?;
            let psharp_prev = psharp_col(a, i, j - 1)?;
            let len = j - i + 1;
            for k in 0..len {
                let lower = if k >= 1 { p_inner[k - 1] } else { C64::zero() };
                let upper = if k < len - 1 { psharp_prev[k] } else { C64::zero() };
                let want_p = lower / rho - r * upper / rho;
                let want_sharp = -r.conj() * lower / rho + upper / rho;
                res.p_recursion = res.p_recursion.max((p[k] - want_p).norm());
                res.p_sharp_recursion = res.p_sharp_recursion.max((psharp[k] - want_sharp).norm());
            }

            let window = a.window(i, j);
            let f = upper_cholesky(&window)?;
            let g = lower_cholesky(&window)?;
            let u = rotation_u(&params, i, j);
            let lhs = &(&u * &CMatrix::exchange(len)) * &g;
            res.rotation = res.rotation.max((&lhs - &f).max_abs());
        }
    }
    Ok(res)
}
