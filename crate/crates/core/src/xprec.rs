//! Double-double arithmetic for the polynomial recursions, whose coefficients
//! grow large enough that plain `f64` accumulation loses the last digits.

use alloc::collections::BTreeMap;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Float;

use crate::linalg::C64;
use crate::ncpoly::NcPoly;
use crate::words::Word;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Xf {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    (s, (a - (s - v)) + (b - v))
}

fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn split(a: f64) -> (f64, f64) {
    let t = 134_217_729.0 * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

impl Xf {
    pub(crate) const ZERO: Xf = Xf { hi: 0.0, lo: 0.0 };
    pub(crate) const ONE: Xf = Xf { hi: 1.0, lo: 0.0 };

    pub(crate) fn from_f64(x: f64) -> Self {
        Xf { hi: x, lo: 0.0 }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub(crate) fn sqrt(self) -> Xf {
        if self.hi <= 0.0 {
            return Xf::ZERO;
        }
        let x = Float::sqrt(self.hi);
        let (p, e) = two_prod(x, x);
        let r = (((self.hi - p) - e) + self.lo) / (2.0 * x);
        let (hi, lo) = fast_two_sum(x, r);
        Xf { hi, lo }
    }
}

impl Add for Xf {
    type Output = Xf;
    fn add(self, o: Xf) -> Xf {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = fast_two_sum(s, e + t);
        let (hi, lo) = fast_two_sum(s, e + f);
        Xf { hi, lo }
    }
}

impl Neg for Xf {
    type Output = Xf;
    fn neg(self) -> Xf {
        Xf { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Xf {
    type Output = Xf;
    fn sub(self, o: Xf) -> Xf {
        self + (-o)
    }
}

impl Mul for Xf {
    type Output = Xf;
    fn mul(self, o: Xf) -> Xf {
        let (p, e) = two_prod(self.hi, o.hi);
        let (hi, lo) = fast_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi));
        Xf { hi, lo }
    }
}

impl Div for Xf {
    type Output = Xf;
    fn div(self, o: Xf) -> Xf {
        let q1 = self.hi / o.hi;
        let r = self - o * Xf::from_f64(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Xf::from_f64(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = fast_two_sum(q1, q2);
        Xf { hi, lo } + Xf::from_f64(q3)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Xc {
    pub(crate) re: Xf,
    pub(crate) im: Xf,
}

impl Xc {
    pub(crate) const ZERO: Xc = Xc { re: Xf::ZERO, im: Xf::ZERO };
    pub(crate) const ONE: Xc = Xc { re: Xf::ONE, im: Xf::ZERO };

    pub(crate) fn from_c64(z: C64) -> Self {
        Xc { re: Xf::from_f64(z.re), im: Xf::from_f64(z.im) }
    }

    pub(crate) fn real(x: Xf) -> Self {
        Xc { re: x, im: Xf::ZERO }
    }

    pub(crate) fn to_c64(self) -> C64 {
        C64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub(crate) fn conj(self) -> Self {
        Xc { re: self.re, im: -self.im }
    }

    pub(crate) fn norm_sqr(self) -> Xf {
        self.re * self.re + self.im * self.im
    }

    pub(crate) fn scale(self, x: Xf) -> Self {
        Xc { re: self.re * x, im: self.im * x }
    }

    pub(crate) fn is_zero(self) -> bool {
        self.re.hi == 0.0 && self.im.hi == 0.0
    }
}

impl Add for Xc {
    type Output = Xc;
    fn add(self, o: Xc) -> Xc {
        Xc { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Neg for Xc {
    type Output = Xc;
    fn neg(self) -> Xc {
        Xc { re: -self.re, im: -self.im }
    }
}

impl Sub for Xc {
    type Output = Xc;
    fn sub(self, o: Xc) -> Xc {
        Xc { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for Xc {
    type Output = Xc;
    fn mul(self, o: Xc) -> Xc {
        Xc { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

impl Div for Xc {
    type Output = Xc;
    fn div(self, o: Xc) -> Xc {
        let den = o.norm_sqr();
        let num = self * o.conj();
        Xc { re: num.re / den, im: num.im / den }
    }
}

/// `sqrt(1 - |g|²)`.
pub(crate) fn defect(g: Xc) -> Xf {
    (Xf::ONE - g.norm_sqr()).sqrt()
}

/// Polynomial with double-double coefficients.
#[derive(Clone, Debug, Default)]
pub(crate) struct XPoly {
    coeffs: BTreeMap<Word, Xc>,
}

impl XPoly {
    pub(crate) fn one() -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Word::empty(), Xc::ONE);
        XPoly { coeffs }
    }

    pub(crate) fn mul_left_letter(&self, k: usize) -> XPoly {
        XPoly { coeffs: self.coeffs.iter().map(|(w, c)| (w.prepend(k), *c)).collect() }
    }

    pub(crate) fn combine(terms: &[(Xc, &XPoly)]) -> XPoly {
        let mut coeffs: BTreeMap<Word, Xc> = BTreeMap::new();
        for (a, p) in terms {
            for (w, c) in &p.coeffs {
                let slot = coeffs.entry(w.clone()).or_insert(Xc::ZERO);
                *slot = *slot + *a * *c;
            }
        }
        XPoly { coeffs }
    }

    pub(crate) fn to_ncpoly(&self, n_letters: usize) -> NcPoly {
        let terms = self.coeffs.iter().filter(|(_, c)| !c.is_zero()).map(|(w, c)| (w.clone(), c.to_c64()));
        NcPoly::from_terms(n_letters, terms).expect("words checked on construction")
    }
}

/// Dense square matrix of double-double entries, row major.
pub(crate) type XMat = alloc::vec::Vec<alloc::vec::Vec<Xc>>;

/// Determinant by Gaussian elimination with partial pivoting; `1` for an empty matrix.
pub(crate) fn determinant(a: &XMat) -> Xc {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Xc::ONE;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m[x][col].norm_sqr().hi.total_cmp(&m[y][col].norm_sqr().hi))
            .expect("nonempty range");
        if m[pivot][col].is_zero() {
            return Xc::ZERO;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det = det * m[col][col];
        let inv = Xc::ONE / m[col][col];
        for row in col + 1..n {
            let f = m[row][col] * inv;
            if f.is_zero() {
                continue;
            }
            let (upper, lower) = m.split_at_mut(row);
            for (x, &v) in lower[0][col + 1..].iter_mut().zip(&upper[col][col + 1..]) {
                *x = *x - f * v;
            }
        }
    }
    det
}
