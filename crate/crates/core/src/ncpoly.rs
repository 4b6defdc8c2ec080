//! Polynomials in `N` noncommuting indeterminates `X_1, …, X_N`.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::ball::MatrixTuple;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::words::Word;

/// `Σ c_σ X_σ` with finitely many nonzero coefficients.
///
/// Exact zeros are never stored; [`NcPoly::prune`] drops small ones too.
#[derive(Clone, Debug, PartialEq)]
pub struct NcPoly {
    n_letters: usize,
    coeffs: BTreeMap<Word, C64>,
}

impl NcPoly {
    pub fn zero(n_letters: usize) -> Self {
        NcPoly { n_letters, coeffs: BTreeMap::new() }
    }

    pub fn one(n_letters: usize) -> Self {
        Self::constant(n_letters, C64::new(1.0, 0.0))
    }

    pub fn constant(n_letters: usize, c: C64) -> Self {
        let mut p = Self::zero(n_letters);
        p.add_term(Word::empty(), c);
        p
    }

    /// The indeterminate `X_k`.
    pub fn var(n_letters: usize, k: usize) -> Self {
        Self::monomial(n_letters, Word::letter(k), C64::new(1.0, 0.0))
    }

    pub fn monomial(n_letters: usize, w: Word, c: C64) -> Self {
        let mut p = Self::zero(n_letters);
        p.add_term(w, c);
        p
    }

    /// Collects `(word, coefficient)` pairs, summing repeated words.
    pub fn from_terms(n_letters: usize, terms: impl IntoIterator<Item = (Word, C64)>) -> Result<Self> {
        let mut p = Self::zero(n_letters);
        for (w, c) in terms {
            w.check(n_letters)?;
            p.add_term(w, c);
        }
        Ok(p)
    }

    /// Coefficients against an ordered word list (words not listed must vanish).
    pub fn from_dense(n_letters: usize, words: &[Word], coeffs: &[C64]) -> Self {
        let mut p = Self::zero(n_letters);
        for (w, c) in words.iter().zip(coeffs) {
            p.add_term(w.clone(), *c);
        }
        p
    }

    pub fn n_letters(&self) -> usize {
        self.n_letters
    }

    pub fn coeff(&self, w: &Word) -> C64 {
        self.coeffs.get(w).copied().unwrap_or_else(C64::zero)
    }

    /// Terms in graded-lexicographic order of their words.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C64)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Length of the longest word in the support; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().next_back().map(Word::len)
    }

    /// Highest word in the support together with its coefficient.
    pub fn leading_term(&self) -> Option<(&Word, &C64)> {
        self.coeffs.iter().next_back()
    }

    pub fn dense(&self, words: &[Word]) -> Vec<C64> {
        words.iter().map(|w| self.coeff(w)).collect()
    }

    fn add_term(&mut self, w: Word, c: C64) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(w) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// Drops coefficients with modulus at most `tol`.
    pub fn prune(&mut self, tol: f64) {
        self.coeffs.retain(|_, c| c.norm() > tol);
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut p = Self::zero(self.n_letters);
        for (w, v) in &self.coeffs {
            p.add_term(w.clone(), v * c);
        }
        p
    }

    fn same_alphabet(&self, other: &NcPoly) -> Result<()> {
        if self.n_letters != other.n_letters {
            return Err(Error::AlphabetMismatch { left: self.n_letters, right: other.n_letters });
        }
        Ok(())
    }

    /// `Σ a_i P_i`.
    pub fn linear_combine(terms: &[(C64, &NcPoly)]) -> Result<NcPoly> {
        let n_letters = match terms.first() {
            Some((_, p)) => p.n_letters,
            None => return Err(Error::Domain("empty linear combination")),
        };
        let mut out = NcPoly::zero(n_letters);
        for (a, p) in terms {
            out.same_alphabet(p)?;
            for (w, c) in &p.coeffs {
                out.add_term(w.clone(), a * c);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &NcPoly) -> Result<NcPoly> {
        let one = C64::new(1.0, 0.0);
        Self::linear_combine(&[(one, self), (one, other)])
    }

    pub fn sub(&self, other: &NcPoly) -> Result<NcPoly> {
        Self::linear_combine(&[(C64::new(1.0, 0.0), self), (C64::new(-1.0, 0.0), other)])
    }

    /// Product by juxtaposition of words.
    pub fn mul(&self, other: &NcPoly) -> Result<NcPoly> {
        self.same_alphabet(other)?;
        let mut out = NcPoly::zero(self.n_letters);
        for (u, a) in &self.coeffs {
            for (v, b) in &other.coeffs {
                out.add_term(crate::words::concat(u, v), a * b);
            }
        }
        Ok(out)
    }

    /// `X_k · self`: prepends `k` to every word.
    pub fn mul_left_letter(&self, k: usize) -> Result<NcPoly> {
        if k == 0 || k > self.n_letters {
            return Err(Error::LetterOutOfRange { letter: k, n_letters: self.n_letters });
        }
        Ok(NcPoly { n_letters: self.n_letters, coeffs: self.coeffs.iter().map(|(w, c)| (w.prepend(k), *c)).collect() })
    }

    /// `Σ c_σ Z_σ` with `Z_∅ = I`.
    pub fn eval_matrix(&self, z: &MatrixTuple) -> Result<CMatrix> {
        if z.n_letters() != self.n_letters {
            return Err(Error::AlphabetMismatch { left: self.n_letters, right: z.n_letters() });
        }
        let d = z.dim();
        let mut out = CMatrix::zeros(d, d);
        // products shared through the prefix cache: Z_{kσ} = Z_k Z_σ
        let mut cache: BTreeMap<Word, CMatrix> = BTreeMap::new();
        for (w, c) in &self.coeffs {
            let zw = word_power(z, w, &mut cache);
            out = &out + &zw.scale(*c);
        }
        Ok(out)
    }
}

fn word_power(z: &MatrixTuple, w: &Word, cache: &mut BTreeMap<Word, CMatrix>) -> CMatrix {
    if let Some(m) = cache.get(w) {
        return m.clone();
    }
    let m = match w.first() {
        None => CMatrix::identity(z.dim()),
        Some(k) => {
            let rest = word_power(z, &w.tail(), cache);
            &z.matrices()[k - 1] * &rest
        }
    };
    cache.insert(w.clone(), m.clone());
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn w(s: &str) -> Word {
        Word::parse(s, 9).unwrap()
    }

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn linear_combine_examples() {
        let gamma = 0.6_f64;
        let d = (1.0 - gamma * gamma).sqrt();
        let x1 = NcPoly::var(2, 1);
        let one = NcPoly::one(2);
        let phi1 = NcPoly::linear_combine(&[(r(1.0 / d), &x1), (r(-gamma / d), &one)]).unwrap();
        assert!((phi1.coeff(&Word::empty()) - r(-0.75)).norm() < 1e-15);
        assert!((phi1.coeff(&w("1")) - r(1.25)).norm() < 1e-15);

        assert!(NcPoly::linear_combine(&[(r(0.0), &phi1)]).unwrap().is_zero());
        let five = NcPoly::linear_combine(&[(r(2.0), &x1), (r(3.0), &x1)]).unwrap();
        assert_eq!(five, NcPoly::monomial(2, w("1"), r(5.0)));

        let other = NcPoly::var(3, 1);
        assert!(matches!(
            NcPoly::linear_combine(&[(r(1.0), &x1), (r(1.0), &other)]),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn multiplication_examples() {
        let x1 = NcPoly::var(2, 1);
        let x2 = NcPoly::var(2, 2);
        assert_eq!(x1.mul(&x2).unwrap(), NcPoly::monomial(2, w("12"), r(1.0)));
        assert_eq!(x2.mul(&x1).unwrap(), NcPoly::monomial(2, w("21"), r(1.0)));
        assert_eq!(NcPoly::one(2).mul(&x1).unwrap(), x1);
        let a = NcPoly::one(2).add(&x1).unwrap();
        let b = NcPoly::one(2).sub(&x1).unwrap();
        let expected = NcPoly::from_terms(2, vec![(Word::empty(), r(1.0)), (w("11"), r(-1.0))]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), expected);
    }

    #[test]
    fn left_letter_examples() {
        let phi1 = NcPoly::from_terms(2, vec![(Word::empty(), r(-0.75)), (w("1"), r(1.25))]).unwrap();
        let got = phi1.mul_left_letter(1).unwrap();
        let expected = NcPoly::from_terms(2, vec![(w("1"), r(-0.75)), (w("11"), r(1.25))]).unwrap();
        assert_eq!(got, expected);
        assert_eq!(got, NcPoly::var(2, 1).mul(&phi1).unwrap());
        assert_eq!(NcPoly::one(2).mul_left_letter(2).unwrap(), NcPoly::var(2, 2));
        assert_eq!(NcPoly::var(2, 2).mul_left_letter(1).unwrap(), NcPoly::monomial(2, w("12"), r(1.0)));
        assert!(NcPoly::one(2).mul_left_letter(3).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let z = MatrixTuple::scalars(&[r(0.5), r(0.2)]);
        let p = NcPoly::monomial(2, w("12"), r(1.0));
        assert!((p.eval_matrix(&z).unwrap()[(0, 0)] - r(0.1)).norm() < 1e-15);
        let z2 =
            MatrixTuple::new(vec![CMatrix::from_vec(2, 2, vec![r(0.1), r(0.2), r(0.3), r(0.4)]), CMatrix::zeros(2, 2)])
                .unwrap();
        assert_eq!(NcPoly::one(2).eval_matrix(&z2).unwrap(), CMatrix::identity(2));
        let phi1 = NcPoly::from_terms(2, vec![(Word::empty(), r(-0.75)), (w("1"), r(1.25))]).unwrap();
        let at = MatrixTuple::scalars(&[r(0.6), r(0.0)]);
        assert!(phi1.eval_matrix(&at).unwrap()[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn cancellation_removes_terms() {
        let x1 = NcPoly::var(2, 1);
        assert!(x1.sub(&x1).unwrap().is_zero());
        assert_eq!(x1.sub(&x1).unwrap().degree(), None);
    }
}
