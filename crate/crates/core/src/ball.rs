//! Matrix points of the noncommutative unit ball `Σ Z_k Z_k* < I`, kernels of
//! the form `Σ_σ Z_σ S_σ W_σ*`, the separating family of tuples, and finite
//! truncations of lower-triangular operators in the tensor algebra.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::kernel::ParamSpec;
use crate::linalg::{self, CMatrix, C64};
use crate::ncpoly::NcPoly;
use crate::szego;
use crate::words::{self, Word};

/// Longest word length [`weighted_kernel`] will sum to.
pub const MAX_TRUNCATION: usize = 60;

/// `N` square matrices of a common size `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixTuple {
    dim: usize,
    mats: Vec<CMatrix>,
}

impl MatrixTuple {
    pub fn new(mats: Vec<CMatrix>) -> Result<Self> {
        let first = mats.first().ok_or(Error::Domain("a tuple needs at least one matrix"))?;
        let dim = first.rows();
        for m in &mats {
            if m.rows() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.rows() });
            }
            if m.cols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.cols() });
            }
        }
        Ok(MatrixTuple { dim, mats })
    }

    /// A tuple of `1 × 1` matrices.
    pub fn scalars(z: &[C64]) -> Self {
        assert!(!z.is_empty(), "a tuple needs at least one matrix");
        MatrixTuple { dim: 1, mats: z.iter().map(|&c| CMatrix::scalar(c)).collect() }
    }

    pub fn zeros(n_letters: usize, dim: usize) -> Self {
        MatrixTuple { dim, mats: vec![CMatrix::zeros(dim, dim); n_letters] }
    }

    pub fn n_letters(&self) -> usize {
        self.mats.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.mats
    }

    /// `Z_σ = Z_{i_1} ⋯ Z_{i_k}`, with `Z_∅ = I`.
    pub fn word_product(&self, w: &Word) -> CMatrix {
        let mut out = CMatrix::identity(self.dim);
        for &l in w.letters() {
            out = &out * &self.mats[l - 1];
        }
        out
    }

    /// `(Z|W) = Σ Z_k W_k*`.
    pub fn pairing(&self, w: &MatrixTuple) -> Result<CMatrix> {
        same_letters(self, w)?;
        let mut out = CMatrix::zeros(self.dim, w.dim);
        for (a, b) in self.mats.iter().zip(&w.mats) {
            out = &out + &(a * &b.adjoint());
        }
        Ok(out)
    }
}

fn same_letters(z: &MatrixTuple, w: &MatrixTuple) -> Result<()> {
    if z.n_letters() != w.n_letters() {
        return Err(Error::AlphabetMismatch { left: z.n_letters(), right: w.n_letters() });
    }
    Ok(())
}

/// `‖Σ Z_k Z_k*‖^{1/2}`; the point lies in the open ball iff this is `< 1`.
pub fn ball_norm(z: &MatrixTuple) -> f64 {
    let s = z.pairing(z).expect("same tuple");
    linalg::spectral_norm(&s).sqrt()
}

fn check_in_ball(z: &MatrixTuple) -> Result<f64> {
    let a = ball_norm(z);
    if a < 1.0 {
        Ok(a)
    } else {
        Err(Error::NotInBall { norm: a })
    }
}

/// Block row `[Z_σ]_{|σ| ≤ max_len}` in graded-lexicographic order.
pub fn e_trunc(z: &MatrixTuple, max_len: usize) -> CMatrix {
    let norm = ball_norm(z);
    if norm >= 1.0 {
        log::warn!("evaluating E(Z) at a point of norm {norm} outside the open ball");
    }
    let mut blocks = vec![CMatrix::identity(z.dim)];
    let mut level_start = 0;
    for _ in 0..max_len {
        let level_end = blocks.len();
        for k in 0..z.n_letters() {
            for i in level_start..level_end {
                let next = &z.mats[k] * &blocks[i];
                blocks.push(next);
            }
        }
        level_start = level_end;
    }
    CMatrix::hcat(&blocks)
}

/// The weights `S_σ` of a kernel `Σ_σ Z_σ S_σ W_σ*`.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight {
    /// The same `S` for every word.
    Constant(CMatrix),
    /// `S_σ` from the table, `fallback` for every other word.
    PerWord { table: BTreeMap<Word, CMatrix>, fallback: CMatrix },
}

impl Weight {
    fn fallback(&self) -> &CMatrix {
        match self {
            Weight::Constant(s) => s,
            Weight::PerWord { fallback, .. } => fallback,
        }
    }

    fn max_norm(&self) -> f64 {
        match self {
            Weight::Constant(s) => linalg::spectral_norm(s),
            Weight::PerWord { table, fallback } => {
                table.values().map(linalg::spectral_norm).fold(linalg::spectral_norm(fallback), f64::max)
            }
        }
    }
}

/// Smallest `L` with `(ab)^{L+1} / (1 - ab) · bound <= tol`.
fn truncation_length(ab: f64, bound: f64, tol: f64) -> Result<usize> {
    if ab == 0.0 || bound == 0.0 {
        return Ok(0);
    }
    let mut tail = ab * bound / (1.0 - ab);
    for len in 0..=MAX_TRUNCATION {
        if tail <= tol {
            return Ok(len);
        }
        tail *= ab;
    }
    Err(Error::TruncationCap { tol, cap: MAX_TRUNCATION })
}

/// `Σ_σ Z_σ S_σ W_σ*` to within `tol`, truncated where the geometric tail
/// bound `(ab)^{L+1} / (1 - ab) · max ‖S_σ‖` drops below `tol`
/// (`a`, `b` the ball norms of `Z`, `W`).
pub fn weighted_kernel(z: &MatrixTuple, w: &MatrixTuple, s: &Weight, tol: f64) -> Result<CMatrix> {
    same_letters(z, w)?;
    let fallback = s.fallback();
    if fallback.rows() != z.dim {
        return Err(Error::DimensionMismatch { expected: z.dim, found: fallback.rows() });
    }
    if fallback.cols() != w.dim {
        return Err(Error::DimensionMismatch { expected: w.dim, found: fallback.cols() });
    }
    let a = check_in_ball(z)?;
    let b = check_in_ball(w)?;
    let len = truncation_length(a * b, s.max_norm(), tol)?;

    let mut level = fallback.clone();
    let mut total = level.clone();
    for _ in 0..len {
        let mut next = CMatrix::zeros(z.dim, w.dim);
        for (zk, wk) in z.mats.iter().zip(&w.mats) {
            next = &next + &(&(zk * &level) * &wk.adjoint());
        }
        level = next;
        total = &total + &level;
    }

    if let Weight::PerWord { table, .. } = s {
        for (word, sw) in table {
            word.check(z.n_letters())?;
            if sw.rows() != z.dim || sw.cols() != w.dim {
                return Err(Error::DimensionMismatch { expected: z.dim, found: sw.rows() });
            }
            let correction = &(&z.word_product(word) * &(sw - fallback)) * &w.word_product(word).adjoint();
            total = &total + &correction;
        }
    }
    Ok(total)
}

/// `K_S(Z, W) = Σ_σ Z_σ W_σ*`.
pub fn szego_kernel(z: &MatrixTuple, w: &MatrixTuple, tol: f64) -> Result<CMatrix> {
    if z.dim != w.dim {
        return Err(Error::DimensionMismatch { expected: z.dim, found: w.dim });
    }
    weighted_kernel(z, w, &Weight::Constant(CMatrix::identity(z.dim)), tol)
}

/// Both sides of the Christoffel-Darboux formula.
#[derive(Clone, Debug, PartialEq)]
pub struct CdReport {
    pub lhs: CMatrix,
    pub rhs: CMatrix,
    pub residual: f64,
}

/// Compares `Σ_σ Z_σ S W_σ*` with
/// `S = φ♯_{σ(n)}(Z) φ♯_{σ(n)}(W)* - Σ_{|τ|=n} φ_τ(Z) φ_τ(W)*`
/// against `Σ_{|τ|<n} φ_τ(Z) φ_τ(W)*`.
pub fn cd_check(p: &ParamSpec, z: &MatrixTuple, w: &MatrixTuple, n: usize, tol: f64) -> Result<CdReport> {
    if n < 1 {
        return Err(Error::Domain("the Christoffel-Darboux check needs n >= 1"));
    }
    if z.n_letters() != p.n_letters() {
        return Err(Error::AlphabetMismatch { left: p.n_letters(), right: z.n_letters() });
    }
    same_letters(z, w)?;
    if z.dim != w.dim {
        return Err(Error::DimensionMismatch { expected: z.dim, found: w.dim });
    }
    check_in_ball(z)?;
    check_in_ball(w)?;
    let fam = szego::szego_recursion(p, n);
    let outer = |poly: &NcPoly| -> Result<CMatrix> { Ok(&poly.eval_matrix(z)? * &poly.eval_matrix(w)?.adjoint()) };

    let top = fam.phi_sharp(&words::sigma_max(p.n_letters(), n)).expect("family reaches length n");
    let mut s = outer(top)?;
    let mut rhs = CMatrix::zeros(z.dim, w.dim);
    for (tau, phi) in fam.phis() {
        let term = outer(phi)?;
        if tau.len() == n {
            s = &s - &term;
        } else {
            rhs = &rhs + &term;
        }
    }
    let lhs = weighted_kernel(z, w, &Weight::Constant(s), tol)?;
    let residual = linalg::spectral_norm(&(&lhs - &rhs));
    Ok(CdReport { lhs, rhs, residual })
}

/// Dense integer matrix used for exact pattern arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Matrix unit `E_{ij}` with 1-based indices.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n);
        m.data[(i - 1) * n + (j - 1)] = 1;
        m
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        IntMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a != 0 {
                    for j in 0..n {
                        out.data[i * n + j] += a * other.get(k, j);
                    }
                }
            }
        }
        out
    }

    /// `self ⊗ I_d` scaled by `c`.
    fn to_complex(&self, c: f64, d: usize) -> CMatrix {
        let n = self.n;
        CMatrix::from_fn(n * d, n * d, |r, s| {
            if r % d == s % d {
                C64::new(c * self.get(r / d, s / d) as f64, 0.0)
            } else {
                C64::zero()
            }
        })
    }
}

/// The `2|σ|` tuples of the separating construction for a word `σ`.
///
/// For `σ = i_1 ⋯ i_k` on the space `ℂ^{2k} ⊗ ℂ^{d}` and `p = 1..k`:
/// `W*_s = 2^{-1/2} Σ_{r : i_{k+1-r} = s} E_{r+p-1, r+p}`, so that
/// `W*_σ = 2^{-k/2} E_{p, k+p}`; for `q = 1..k`:
/// `W*_s = 2^{-1/2} Σ_{r : i_r = s} E_{r+q, r+q-1}`, so that
/// `W*_σ = 2^{-k/2} E_{k+q, q}`. Every other word of length `k` gives zero.
///
/// The patterns are stored as 0/1 matrices; the tuples are `W_s = (W*_s)*`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparatingFamily {
    word: Word,
    n_letters: usize,
    base_dim: usize,
    patterns: Vec<Vec<IntMatrix>>,
}

/// Outcome of the exact checks on a [`SeparatingFamily`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeparationReport {
    /// `W*_σ` equals the prescribed scaled matrix unit for every tuple.
    pub hits_word: bool,
    /// `W*_τ = 0` for every other `τ` of the same length, for every tuple.
    pub misses_others: bool,
    pub rank: usize,
    pub full_rank: bool,
}

impl SeparatingFamily {
    pub fn new(sigma: &Word, n_letters: usize, base_dim: usize) -> Result<Self> {
        if sigma.is_empty() {
            return Err(Error::Domain("the separating family needs a nonempty word"));
        }
        if base_dim == 0 {
            return Err(Error::Domain("base dimension must be positive"));
        }
        sigma.check(n_letters)?;
        let k = sigma.len();
        let i = sigma.letters();
        let n = 2 * k;
        let mut patterns = Vec::with_capacity(n);
        for p in 1..=k {
            let tuple = (1..=n_letters)
                .map(|s| {
                    (1..=k)
                        .filter(|&r| i[k - r] == s)
                        .fold(IntMatrix::zeros(n), |acc, r| acc.add(&IntMatrix::unit(n, r + p - 1, r + p)))
                })
                .collect();
            patterns.push(tuple);
        }
        for q in 1..=k {
            let tuple = (1..=n_letters)
                .map(|s| {
                    (1..=k)
                        .filter(|&r| i[r - 1] == s)
                        .fold(IntMatrix::zeros(n), |acc, r| acc.add(&IntMatrix::unit(n, r + q, r + q - 1)))
                })
                .collect();
            patterns.push(tuple);
        }
        Ok(SeparatingFamily { word: sigma.clone(), n_letters, base_dim, patterns })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    /// Dimension of the space the tuples act on, `2|σ| · base_dim`.
    pub fn ambient_dim(&self) -> usize {
        2 * self.word.len() * self.base_dim
    }

    /// The 0/1 patterns `√2 · W*_s` of tuple `p` (0-based).
    pub fn star_patterns(&self, p: usize) -> &[IntMatrix] {
        &self.patterns[p]
    }

    /// `2^{|τ|/2} W*_τ = √2W*_{τ_k} ⋯ √2W*_{τ_1}` for tuple `p`, exactly.
    pub fn star_word_pattern(&self, p: usize, tau: &Word) -> IntMatrix {
        let n = 2 * self.word.len();
        tau.letters().iter().rev().fold(IntMatrix::identity(n), |acc, &l| acc.mul(&self.patterns[p][l - 1]))
    }

    /// The prescribed pattern of `2^{k/2} W*_σ` for tuple `p` (0-based).
    pub fn expected_pattern(&self, p: usize) -> IntMatrix {
        let k = self.word.len();
        let n = 2 * k;
        if p < k {
            IntMatrix::unit(n, p + 1, k + p + 1)
        } else {
            let q = p - k + 1;
            IntMatrix::unit(n, k + q, q)
        }
    }

    pub fn tuples(&self) -> Vec<MatrixTuple> {
        let c = 1.0 / 2.0_f64.sqrt();
        self.patterns
            .iter()
            .map(|tuple| {
                MatrixTuple::new(tuple.iter().map(|m| m.to_complex(c, self.base_dim).adjoint()).collect())
                    .expect("square matrices of one size")
            })
            .collect()
    }

    pub fn check(&self) -> SeparationReport {
        let k = self.word.len();
        let mut hits_word = true;
        let mut misses_others = true;
        for p in 0..2 * k {
            hits_word &= self.star_word_pattern(p, &self.word) == self.expected_pattern(p);
            for tau in words::words_of_length(self.n_letters, k) {
                if tau != self.word {
                    misses_others &= self.star_word_pattern(p, &tau).is_zero();
                }
            }
        }
        let blocks: Vec<CMatrix> = self.tuples().iter().map(|t| t.word_product(&self.word).adjoint()).collect();
        let stacked = CMatrix::hcat(&blocks);
        let rank = linalg::rank(&stacked, 1e-9);
        SeparationReport { hits_word, misses_others, rank, full_rank: rank == self.ambient_dim() }
    }
}

/// The tuples of [`SeparatingFamily::new`].
pub fn separating_family(sigma: &Word, n_letters: usize, base_dim: usize) -> Result<Vec<MatrixTuple>> {
    Ok(SeparatingFamily::new(sigma, n_letters, base_dim)?.tuples())
}

/// Lower-triangular truncation over word levels `0..=L` of the operator of
/// left multiplication by `f`: entry `(ρ, τ)` is `c_α` when `ρ = τα`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangularTruncation {
    n_letters: usize,
    levels: usize,
    matrix: CMatrix,
}

impl TriangularTruncation {
    pub fn n_letters(&self) -> usize {
        self.n_letters
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// The block with rows at word level `i` and columns at level `j`.
    pub fn block(&self, i: usize, j: usize) -> CMatrix {
        let start = |l: usize| if l == 0 { 0 } else { words::word_count(self.n_letters, l - 1) };
        let len = |l: usize| self.n_letters.pow(l as u32);
        self.matrix.submatrix(start(i), start(i) + len(i), start(j), start(j) + len(j))
    }

    /// Column 0: the coefficients `c_σ`, `|σ| ≤ L`.
    pub fn coefficients(&self) -> Vec<C64> {
        self.matrix.column(0)
    }
}

pub fn toeplitz_tf(f: &NcPoly, levels: usize) -> TriangularTruncation {
    if f.degree().is_some_and(|d| d > levels) {
        log::warn!("coefficients of words longer than {levels} are dropped from the truncation");
    }
    let n = f.n_letters();
    let ws = words::enumerate_words(n, levels);
    let mut matrix = CMatrix::zeros(ws.len(), ws.len());
    for (col, tau) in ws.iter().enumerate() {
        for (alpha, c) in f.terms() {
            if tau.len() + alpha.len() <= levels {
                let row = words::index_of(&words::concat(tau, alpha), n);
                matrix[(row, col)] = *c;
            }
        }
    }
    TriangularTruncation { n_letters: n, levels, matrix }
}

/// `‖A - Σ F_k A F_k* - G J G*‖` on word levels `0..L-1`, with `A = I - T T*`,
/// `F_k e_τ = e_{kτ}`, `G = [e_∅, T e_∅]` and `J = diag(1, -1)`.
pub fn displacement_residual(f: &NcPoly, levels: usize) -> Result<f64> {
    if levels < 1 {
        return Err(Error::Domain("the displacement check needs at least one level"));
    }
    let n = f.n_letters();
    let t = toeplitz_tf(f, levels);
    let size = t.matrix.rows();
    let a = &CMatrix::identity(size) - &(&t.matrix * &t.matrix.adjoint());

    let ws = words::enumerate_words(n, levels);
    let mut shifted = CMatrix::zeros(size, size);
    for (i, u) in ws.iter().enumerate().filter(|(_, u)| u.len() < levels) {
        for (j, v) in ws.iter().enumerate().filter(|(_, v)| v.len() < levels) {
            for k in 1..=n {
                let r = words::index_of(&u.prepend(k), n);
                let c = words::index_of(&v.prepend(k), n);
                shifted[(r, c)] += a[(i, j)];
            }
        }
    }

    let col = t.coefficients();
    let gjg = CMatrix::from_fn(size, size, |i, j| {
        let unit = if i == 0 && j == 0 { C64::new(1.0, 0.0) } else { C64::zero() };
        unit - col[i] * col[j].conj()
    });

    let residual = &(&a - &shifted) - &gjg;
    let exact = words::word_count(n, levels - 1);
    Ok(residual.submatrix(0, exact, 0, exact).max_abs())
}

/// Spectral norm of the truncation of `f` to levels `0..=L`.
pub fn schur_truncation_norm(f: &NcPoly, levels: usize) -> f64 {
    linalg::spectral_norm(toeplitz_tf(f, levels).matrix())
}

/// Smallest eigenvalue of the block matrix
/// `[Σ_σ Z_σ^a (I - f(Z^a) f(Z^b)*) (Z_σ^b)*]_{a,b}`.
pub fn cf_gram(f: &NcPoly, points: &[MatrixTuple], tol: f64) -> Result<f64> {
    let first = points.first().ok_or(Error::Domain("cf_gram needs at least one point"))?;
    let d = first.dim;
    for z in points {
        if z.dim != d {
            return Err(Error::DimensionMismatch { expected: d, found: z.dim });
        }
        check_in_ball(z)?;
    }
    let values = points.iter().map(|z| f.eval_matrix(z)).collect::<Result<Vec<_>>>()?;
    let m = points.len();
    let mut big = CMatrix::zeros(m * d, m * d);
    for a in 0..m {
        for b in a..m {
            let s = &CMatrix::identity(d) - &(&values[a] * &values[b].adjoint());
            let block = weighted_kernel(&points[a], &points[b], &Weight::Constant(s), tol)?;
            big.set_block(a * d, b * d, &block);
            if a != b {
                big.set_block(b * d, a * d, &block.adjoint());
            }
        }
    }
    let eig = linalg::hermitian_eigenvalues(&big);
    Ok(eig[0])
}

/// `f(Z) = E(Z) (T_f ⊗ I) e_∅`: the coefficient column paired with the block row.
pub fn eval_series(f: &NcPoly, z: &MatrixTuple) -> Result<CMatrix> {
    if f.n_letters() != z.n_letters() {
        return Err(Error::AlphabetMismatch { left: f.n_letters(), right: z.n_letters() });
    }
    check_in_ball(z)?;
    let deg = f.degree().unwrap_or(0);
    let e = e_trunc(z, deg);
    let col = toeplitz_tf(f, deg).coefficients();
    let d = z.dim;
    let lifted = CMatrix::from_fn(col.len() * d, d, |r, c| if r % d == c { col[r / d] } else { C64::zero() });
    Ok(&e * &lifted)
}
