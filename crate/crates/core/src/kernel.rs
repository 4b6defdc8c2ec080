//! Stationary positive-definite kernels on the free semigroup.
//!
//! A stationary kernel is fixed by its moments `s_σ = K(∅, σ)`: common first
//! letters are stripped (`K(iσ, iτ) = K(σ, τ)`), different first letters give
//! zero, and `K(∅, ρ) = s_ρ`, `K(ρ, ∅) = conj(s_ρ)`.
//!
//! The same kernel is described by its Schur parameters `γ_σ`, the partial
//! correlations of `∅` and `σ` given every word strictly between them in the
//! graded-lexicographic chain. [`extract_params`] and [`synthesize_moments`]
//! convert between the two descriptions.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Float, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::ncpoly::NcPoly;
use crate::words::{self, Word};

/// Moments `s_σ` of a stationary kernel; `s(∅) = 1`, missing words are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSpec {
    n_letters: usize,
    s: BTreeMap<Word, C64>,
}

impl MomentSpec {
    /// Validates the alphabet and the unit normalization of `s(∅)`.
    pub fn new(n_letters: usize, moments: BTreeMap<Word, C64>) -> Result<Self> {
        if n_letters == 0 {
            return Err(Error::Domain("alphabet must have at least one letter"));
        }
        let mut s = BTreeMap::new();
        for (w, c) in moments {
            w.check(n_letters)?;
            if w.is_empty() {
                if c != C64::new(1.0, 0.0) {
                    return Err(Error::NonUnitMoment { value: (c.re, c.im) });
                }
                continue;
            }
            if !c.is_zero() {
                s.insert(w, c);
            }
        }
        Ok(MomentSpec { n_letters, s })
    }

    /// The kernel with `K(σ, τ) = δ_{στ}`.
    pub fn delta(n_letters: usize) -> Self {
        MomentSpec { n_letters, s: BTreeMap::new() }
    }

    pub fn n_letters(&self) -> usize {
        self.n_letters
    }

    pub fn moment(&self, w: &Word) -> C64 {
        if w.is_empty() {
            return C64::new(1.0, 0.0);
        }
        self.s.get(w).copied().unwrap_or_else(C64::zero)
    }

    /// Nonzero moments of nonempty words, in graded-lexicographic order.
    pub fn moments(&self) -> impl Iterator<Item = (&Word, &C64)> {
        self.s.iter()
    }

    /// Largest stored word length (0 for the delta kernel).
    pub fn max_len(&self) -> usize {
        self.s.keys().next_back().map_or(0, Word::len)
    }

    fn set(&mut self, w: Word, c: C64) {
        if c.is_zero() {
            self.s.remove(&w);
        } else {
            self.s.insert(w, c);
        }
    }
}

/// Schur parameters `γ_σ` with `|γ_σ| < 1` and `γ_∅ = 0`; missing words are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSpec {
    n_letters: usize,
    gamma: BTreeMap<Word, C64>,
}

impl ParamSpec {
    pub fn new(n_letters: usize, gamma: BTreeMap<Word, C64>) -> Result<Self> {
        if n_letters == 0 {
            return Err(Error::Domain("alphabet must have at least one letter"));
        }
        let mut out = BTreeMap::new();
        for (w, g) in gamma {
            w.check(n_letters)?;
            if w.is_empty() {
                if !g.is_zero() {
                    return Err(Error::Domain("the parameter of the empty word must be zero"));
                }
                continue;
            }
            let modulus = g.norm();
            if modulus.is_nan() || modulus >= 1.0 {
                return Err(Error::ParameterOutOfDisk { word: w.encode(n_letters), modulus });
            }
            if !g.is_zero() {
                out.insert(w, g);
            }
        }
        Ok(ParamSpec { n_letters, gamma: out })
    }

    pub fn zero(n_letters: usize) -> Self {
        ParamSpec { n_letters, gamma: BTreeMap::new() }
    }

    pub fn n_letters(&self) -> usize {
        self.n_letters
    }

    pub fn gamma(&self, w: &Word) -> C64 {
        self.gamma.get(w).copied().unwrap_or_else(C64::zero)
    }

    /// `d_σ = (1 - |γ_σ|²)^{1/2}`.
    pub fn defect(&self, w: &Word) -> f64 {
        (1.0 - self.gamma(w).norm_sqr()).sqrt()
    }

    pub fn params(&self) -> impl Iterator<Item = (&Word, &C64)> {
        self.gamma.iter()
    }

    /// The parameters of words of length at most `max_len`.
    pub fn truncated(&self, max_len: usize) -> ParamSpec {
        let gamma = self.gamma.iter().filter(|(w, _)| w.len() <= max_len).map(|(w, g)| (w.clone(), *g)).collect();
        ParamSpec { n_letters: self.n_letters, gamma }
    }

    /// Largest max-component distance to `other` over all stored words.
    pub fn max_distance(&self, other: &ParamSpec) -> f64 {
        self.gamma.keys().chain(other.gamma.keys()).map(|w| (self.gamma(w) - other.gamma(w)).norm()).fold(0.0, f64::max)
    }
}

/// `K(σ, τ)` by stripping common first letters.
pub fn kernel_eval(m: &MomentSpec, sigma: &Word, tau: &Word) -> C64 {
    let (a, b) = (sigma.letters(), tau.letters());
    let common = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    let (a, b) = (&a[common..], &b[common..]);
    if a.is_empty() {
        m.moment(&Word::from_letters(b))
    } else if b.is_empty() {
        m.moment(&Word::from_letters(a)).conj()
    } else {
        C64::zero()
    }
}

/// Gram matrix `[K(ws[a], ws[b])]`.
pub fn gram(m: &MomentSpec, ws: &[Word]) -> CMatrix {
    CMatrix::from_fn(ws.len(), ws.len(), |a, b| kernel_eval(m, &ws[a], &ws[b]))
}

/// `⟨P, Q⟩_K = Σ K(σ, τ) q_τ conj(p_σ)`.
pub fn inner_product(m: &MomentSpec, p: &NcPoly, q: &NcPoly) -> Result<C64> {
    for poly in [p, q] {
        if poly.n_letters() != m.n_letters {
            return Err(Error::AlphabetMismatch { left: m.n_letters, right: poly.n_letters() });
        }
    }
    let mut acc = C64::zero();
    for (sigma, c) in p.terms() {
        for (tau, d) in q.terms() {
            acc += kernel_eval(m, sigma, tau) * d * c.conj();
        }
    }
    Ok(acc)
}

/// Partial correlations of index `i` with every later index of a unit-diagonal
/// positive-definite matrix, given the indices strictly between.
///
/// Returns `r[j - i - 1] = r_{i,j}` for `j > i`. With `S = A[i+1.., i+1..] = L L*`
/// and `y = L⁻¹ A[i+1.., i]`, the pair `(i, j)` with `m = j - i - 1` gives
/// `r = (a_ij - Σ_{k<m} conj(y_k L_mk)) / (sqrt(1 - Σ_{k<m} |y_k|²) L_mm)`.
pub(crate) fn partial_correlation_row(a: &CMatrix, i: usize) -> Result<Vec<C64>> {
    let n = a.rows();
    if i + 1 >= n {
        return Ok(Vec::new());
    }
    let s = a.principal(i + 1, n - 1);
    let l = linalg::cholesky(&s).map_err(|e| shift_index(e, i + 1))?;
    let c: Vec<C64> = (i + 1..n).map(|k| a[(k, i)]).collect();
    let y = linalg::forward_substitute(&l, &c);
    let mut out = Vec::with_capacity(n - i - 1);
    let mut cross_norm = 0.0;
    for m in 0..n - i - 1 {
        let mut proj = C64::zero();
        for k in 0..m {
            proj += (y[k] * l[(m, k)]).conj();
        }
        let left = (1.0 - cross_norm).max(0.0).sqrt();
        let right = l[(m, m)].re;
        out.push((a[(i, i + 1 + m)] - proj) / (left * right));
        cross_norm += y[m].norm_sqr();
    }
    Ok(out)
}

fn shift_index(e: Error, offset: usize) -> Error {
    match e {
        Error::NotPositiveDefinite { index, pivot } => Error::NotPositiveDefinite { index: index + offset, pivot },
        other => other,
    }
}

/// Schur parameters of all words `∅ ≺ σ ⪯ σ(max_len)`.
pub fn extract_params(m: &MomentSpec, max_len: usize) -> Result<ParamSpec> {
    let ws = words::enumerate_words(m.n_letters, max_len);
    let g = gram(m, &ws);
    linalg::cholesky(&g)?;
    let row = partial_correlation_row(&g, 0)?;
    let mut gamma = BTreeMap::new();
    for (w, r) in ws.into_iter().skip(1).zip(row) {
        if !r.is_zero() {
            gamma.insert(w, r);
        }
    }
    Ok(ParamSpec { n_letters: m.n_letters, gamma })
}

/// Moments of all words up to `max_len` whose Schur parameters are `p`.
///
/// Built one length at a time: the Gram block of nonempty words up to length
/// `ℓ` only involves moments of length `< ℓ`, so its Cholesky factor is
/// known before the moments of length `ℓ` are solved for.
pub fn synthesize_moments(p: &ParamSpec, max_len: usize) -> MomentSpec {
    let n = p.n_letters;
    let mut m = MomentSpec::delta(n);
    for level in 1..=max_len {
        let ws = words::enumerate_words(n, level);
        let s = gram(&m, &ws[1..]);
        let l = linalg::cholesky(&s).expect("parameters in the open disk give a positive-definite chain");
        let mut y: Vec<C64> = vec![C64::zero(); ws.len() - 1];
        let mut cross_norm = 0.0;
        for (mi, w) in ws.iter().enumerate().skip(1).map(|(j, w)| (j - 1, w)) {
            if w.len() == level {
                let mut proj = C64::zero();
                for k in 0..mi {
                    proj += (y[k] * l[(mi, k)]).conj();
                }
                let scale = (1.0 - cross_norm).max(0.0).sqrt() * l[(mi, mi)].re;
                m.set(w.clone(), proj + p.gamma(w) * scale);
            }
            let mut v = m.moment(w).conj();
            for k in 0..mi {
                v -= l[(mi, k)] * y[k];
            }
            y[mi] = v / l[(mi, mi)];
            cross_norm += y[mi].norm_sqr();
        }
    }
    m
}

/// Chain parameter `γ_{σ,τ}` of a pair `σ ⪯ τ`, read off from `{γ_σ}`.
pub fn pair_gamma(p: &ParamSpec, sigma: &Word, tau: &Word) -> Result<C64> {
    if sigma > tau {
        return Err(Error::Domain("pair_gamma needs sigma <= tau"));
    }
    if sigma == tau {
        return Ok(C64::zero());
    }
    let (a, b) = (sigma.letters(), tau.letters());
    let common = a.iter().zip(b).take_while(|(x, y)| x == y).count();
    if common == a.len() {
        Ok(p.gamma(&Word::from_letters(&b[common..])))
    } else {
        Ok(C64::zero())
    }
}

/// `D_σ = det[K(σ', τ')]_{σ', τ' ⪯ σ}` from the product over ordered pairs of
/// `1 - |γ_{σ',τ'}|²`.
pub fn det_d(p: &ParamSpec, sigma: &Word) -> f64 {
    let n = p.n_letters;
    let ws = words::enumerate_words(n, sigma.len());
    let top = words::index_of(sigma, n);
    let mut det = 1.0;
    for b in 1..=top {
        for a in 0..b {
            let g = pair_gamma(p, &ws[a], &ws[b]).expect("ordered pair");
            det *= 1.0 - g.norm_sqr();
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s, 9).unwrap()
    }

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn params(n: usize, entries: &[(&str, f64)]) -> ParamSpec {
        ParamSpec::new(n, entries.iter().map(|(k, v)| (w(k), r(*v))).collect()).unwrap()
    }

    #[test]
    fn kernel_values_from_the_worked_example() {
        let m = MomentSpec::new(2, [(w("1"), r(0.6)), (w("2"), r(0.4)), (w("11"), r(0.1))].into()).unwrap();
        assert_eq!(kernel_eval(&m, &w("1"), &w("11")), r(0.6));
        assert_eq!(kernel_eval(&m, &w("2"), &w("11")), r(0.0));
        assert_eq!(kernel_eval(&m, &w("12"), &w("12")), r(1.0));
        assert_eq!(kernel_eval(&m, &w("11"), &Word::empty()), r(0.1));
    }

    #[test]
    fn gram_examples() {
        let s1 = C64::new(0.3, 0.2);
        let m = MomentSpec::new(2, [(w("1"), s1), (w("2"), r(0.4)), (w("11"), r(0.1))].into()).unwrap();
        let g = gram(&m, &[Word::empty(), w("1")]);
        assert_eq!(g, CMatrix::from_vec(2, 2, vec![r(1.0), s1, s1.conj(), r(1.0)]));
        let g4 = gram(&m, &[Word::empty(), w("1"), w("2"), w("11")]);
        #[rustfmt::skip]
        let expected = CMatrix::from_vec(4, 4, vec![
            r(1.0), s1, r(0.4), r(0.1),
            s1.conj(), r(1.0), r(0.0), s1,
            r(0.4), r(0.0), r(1.0), r(0.0),
            r(0.1), s1.conj(), r(0.0), r(1.0),
        ]);
        assert_eq!(g4, expected);
        let ws = words::enumerate_words(2, 2);
        assert_eq!(gram(&MomentSpec::delta(2), &ws), CMatrix::identity(7));
    }

    #[test]
    fn inner_product_examples() {
        let m = MomentSpec::new(2, [(w("1"), r(0.6))].into()).unwrap();
        let phi1 = NcPoly::from_terms(2, [(Word::empty(), r(-0.75)), (w("1"), r(1.25))]).unwrap();
        assert!((inner_product(&m, &phi1, &phi1).unwrap() - r(1.0)).norm() < 1e-14);
        let one = NcPoly::one(2);
        assert_eq!(inner_product(&m, &one, &one).unwrap(), r(1.0));
        assert_eq!(inner_product(&m, &one, &NcPoly::var(2, 1)).unwrap(), r(0.6));
    }

    #[test]
    fn moment_spec_validation() {
        assert!(matches!(MomentSpec::new(2, [(Word::empty(), r(0.5))].into()), Err(Error::NonUnitMoment { .. })));
        assert!(MomentSpec::new(2, [(Word::empty(), r(1.0))].into()).is_ok());
        assert!(matches!(ParamSpec::new(2, [(w("1"), r(1.0))].into()), Err(Error::ParameterOutOfDisk { .. })));
        assert!(ParamSpec::new(2, [(Word::empty(), r(0.1))].into()).is_err());
        assert!(matches!(ParamSpec::new(2, [(w("3"), r(0.1))].into()), Err(Error::LetterOutOfRange { .. })));
    }

    #[test]
    fn synthesis_examples() {
        let p = params(2, &[("1", 0.6), ("2", 0.5)]);
        let m = synthesize_moments(&p, 2);
        assert!((m.moment(&w("1")) - r(0.6)).norm() < 1e-15);
        assert!((m.moment(&w("2")) - r(0.4)).norm() < 1e-15);
        let zero = synthesize_moments(&ParamSpec::zero(3), 3);
        assert_eq!(zero, MomentSpec::delta(3));

        let q = params(2, &[("1", 0.6)]);
        let mq = synthesize_moments(&q, 2);
        assert!((mq.moment(&w("11")) - r(0.36)).norm() < 1e-15);
    }

    #[test]
    fn brute_force_s11_oracle() {
        // bisection on s_11 for the unique value with γ_{∅,11} = 0.3
        let p = params(2, &[("1", 0.6), ("2", 0.5), ("11", 0.3)]);
        let target = 0.3;
        let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
        let ws = words::enumerate_words(2, 2)[..4].to_vec();
        let gamma_of = |s11: f64| {
            let m = MomentSpec::new(2, [(w("1"), r(0.6)), (w("2"), r(0.4)), (w("11"), r(s11))].into()).unwrap();
            let g = gram(&m, &ws);
            // explicit partial correlation of rows 0 and 3 given rows 1, 2
            let mid = g.principal(1, 2);
            let inv = {
                let det = linalg::determinant(&mid);
                CMatrix::from_vec(
                    2,
                    2,
                    vec![mid[(1, 1)] / det, -mid[(0, 1)] / det, -mid[(1, 0)] / det, mid[(0, 0)] / det],
                )
            };
            let b1 = CMatrix::row_vector(&[g[(0, 1)], g[(0, 2)]]);
            let b2 = CMatrix::column_vector(&[g[(1, 3)], g[(2, 3)]]);
            let num = g[(0, 3)] - (&(&b1 * &inv) * &b2)[(0, 0)];
            let l = 1.0 - (&(&b1 * &inv) * &b1.adjoint())[(0, 0)].re;
            let rr = 1.0 - (&(&b2.adjoint() * &inv) * &b2)[(0, 0)].re;
            num.re / (l.sqrt() * rr.sqrt())
        };
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let v = gamma_of(mid);
            if v.is_nan() || v > target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let m = synthesize_moments(&p, 2);
        assert!((m.moment(&w("11")).re - lo).abs() < 1e-12);
    }

    #[test]
    fn extraction_examples() {
        let p = params(2, &[("1", 0.6), ("2", 0.5), ("11", 0.3), ("21", -0.2)]);
        let m = synthesize_moments(&p, 2);
        let back = extract_params(&m, 2).unwrap();
        assert!(back.max_distance(&p) < 1e-14);
        assert_eq!(extract_params(&MomentSpec::delta(2), 2).unwrap(), ParamSpec::zero(2));

        let bad = MomentSpec::new(2, [(w("1"), r(0.9)), (w("2"), r(0.9))].into()).unwrap();
        assert!(matches!(extract_params(&bad, 1), Err(Error::NotPositiveDefinite { index: 2, .. })));
    }

    #[test]
    fn pair_gamma_examples() {
        let p = params(2, &[("1", 0.6), ("2", 0.5)]);
        assert_eq!(pair_gamma(&p, &w("1"), &w("11")).unwrap(), r(0.6));
        assert_eq!(pair_gamma(&p, &w("2"), &w("11")).unwrap(), r(0.0));
        assert_eq!(pair_gamma(&p, &w("12"), &w("12")).unwrap(), r(0.0));
        assert_eq!(pair_gamma(&p, &w("1"), &w("12")).unwrap(), r(0.5));
        assert!(pair_gamma(&p, &w("11"), &w("2")).is_err());
    }

    #[test]
    fn det_d_examples() {
        let p = params(2, &[("1", 0.6), ("2", 0.5), ("11", 0.3)]);
        assert!((det_d(&p, &w("1")) - 0.64).abs() < 1e-15);
        assert!((det_d(&p, &w("11")) - 0.279552).abs() < 1e-15);
        assert_eq!(det_d(&ParamSpec::zero(2), &w("22")), 1.0);
    }
}
