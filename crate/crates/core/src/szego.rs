//! Orthonormal polynomials `φ_σ` and their duals `φ♯_σ` for a stationary
//! kernel, generated three ways: the elementwise recursion, the graded
//! (level-at-a-time) matrix recursion, and the determinant formula.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::kernel::{self, MomentSpec, ParamSpec};
use crate::lattice::{d_matrix, l_row};
use crate::linalg::{self, CMatrix, C64};
use crate::ncpoly::NcPoly;
use crate::words::{self, Word};
use crate::xprec::{self, XMat, XPoly, Xc, Xf};

#[derive(Clone, Debug, PartialEq)]
pub struct SzegoFamily {
    n_letters: usize,
    max_len: usize,
    phi: BTreeMap<Word, NcPoly>,
    phi_sharp: BTreeMap<Word, NcPoly>,
}

impl SzegoFamily {
    fn from_extended(
        n_letters: usize,
        max_len: usize,
        phi: &BTreeMap<Word, XPoly>,
        sharp: &BTreeMap<Word, XPoly>,
    ) -> Self {
        let round = |m: &BTreeMap<Word, XPoly>| m.iter().map(|(w, p)| (w.clone(), p.to_ncpoly(n_letters))).collect();
        SzegoFamily { n_letters, max_len, phi: round(phi), phi_sharp: round(sharp) }
    }

    fn base(n_letters: usize, max_len: usize) -> Self {
        let mut phi = BTreeMap::new();
        let mut phi_sharp = BTreeMap::new();
        phi.insert(Word::empty(), NcPoly::one(n_letters));
        phi_sharp.insert(Word::empty(), NcPoly::one(n_letters));
        SzegoFamily { n_letters, max_len, phi, phi_sharp }
    }

    pub fn n_letters(&self) -> usize {
        self.n_letters
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn phi(&self, w: &Word) -> Option<&NcPoly> {
        self.phi.get(w)
    }

    pub fn phi_sharp(&self, w: &Word) -> Option<&NcPoly> {
        self.phi_sharp.get(w)
    }

    /// `(σ, φ_σ)` in graded-lexicographic order.
    pub fn phis(&self) -> impl Iterator<Item = (&Word, &NcPoly)> {
        self.phi.iter()
    }

    pub fn phi_sharps(&self) -> impl Iterator<Item = (&Word, &NcPoly)> {
        self.phi_sharp.iter()
    }

    /// Coefficient matrix with columns `φ_σ` against the words up to `max_len`.
    pub fn coefficient_matrix(&self) -> CMatrix {
        let ws = words::enumerate_words(self.n_letters, self.max_len);
        let mut c = CMatrix::zeros(ws.len(), ws.len());
        for (j, w) in ws.iter().enumerate() {
            for (i, v) in self.phi[w].dense(&ws).into_iter().enumerate() {
                c[(i, j)] = v;
            }
        }
        c
    }

    /// Largest coefficient difference between the `φ` of two families.
    pub fn max_phi_diff(&self, other: &SzegoFamily) -> f64 {
        max_poly_diff(&self.phi, &other.phi)
    }

    /// Largest coefficient difference between the `φ♯` present in both families.
    pub fn max_phi_sharp_diff(&self, other: &SzegoFamily) -> f64 {
        max_poly_diff(&self.phi_sharp, &other.phi_sharp)
    }
}

fn max_poly_diff(a: &BTreeMap<Word, NcPoly>, b: &BTreeMap<Word, NcPoly>) -> f64 {
    let mut worst: f64 = 0.0;
    for (w, p) in a {
        let Some(q) = b.get(w) else { return f64::INFINITY };
        let diff = p.sub(q).expect("families share an alphabet");
        for (_, c) in diff.terms() {
            worst = worst.max(c.norm());
        }
    }
    worst
}

/// `φ_{kσ} = (X_k φ_σ - γ_{kσ} φ♯_{kσ-1}) / d_{kσ}`,
/// `φ♯_{kσ} = (-conj(γ_{kσ}) X_k φ_σ + φ♯_{kσ-1}) / d_{kσ}`,
/// with `k` the first letter, `σ` the suffix and `kσ-1` the predecessor.
///
/// Accumulates in double-double precision and rounds once at the end.
pub fn szego_recursion(p: &ParamSpec, max_len: usize) -> SzegoFamily {
    let n = p.n_letters();
    let mut phi: BTreeMap<Word, XPoly> = BTreeMap::new();
    let mut sharp: BTreeMap<Word, XPoly> = BTreeMap::new();
    phi.insert(Word::empty(), XPoly::one());
    sharp.insert(Word::empty(), XPoly::one());
    for w in words::enumerate_words(n, max_len).into_iter().skip(1) {
        let shifted = phi[&w.tail()].mul_left_letter(w.first().expect("nonempty"));
        let pred = words::predecessor(&w, n).expect("nonempty");
        let g = Xc::from_c64(p.gamma(&w));
        let inv_d = Xc::real(Xf::ONE / xprec::defect(g));
        let prev = &sharp[&pred];
        let next_phi = XPoly::combine(&[(inv_d, &shifted), (-(g * inv_d), prev)]);
        let next_sharp = XPoly::combine(&[(-(g.conj() * inv_d), &shifted), (inv_d, prev)]);
        phi.insert(w.clone(), next_phi);
        sharp.insert(w, next_sharp);
    }
    SzegoFamily::from_extended(n, max_len, &phi, &sharp)
}

/// `a_{σσ} = Π_j 1/d_{i_j…i_k}` over the suffixes of `σ = i_1…i_k`.
pub fn leading_coeff(p: &ParamSpec, sigma: &Word) -> f64 {
    (0..sigma.len()).map(|j| 1.0 / p.defect(&Word::from_letters(&sigma.letters()[j..]))).product()
}

/// Row `g_n` and upper-triangular `H_n` built from `{γ_σ}_{|σ|=n}` in order.
pub fn graded_data(p: &ParamSpec, n: usize) -> Result<(Vec<C64>, CMatrix)> {
    if n == 0 {
        return Err(Error::Domain("graded data starts at level 1"));
    }
    let gammas: Vec<C64> = words::words_of_length(p.n_letters(), n).iter().map(|w| p.gamma(w)).collect();
    Ok((l_row(&gammas), d_matrix(&gammas)))
}

/// Level `k` at once:
/// `[φ_{|σ|=k}] = ([X_1 … X_N][φ_{|σ|=k-1}]^{⊕N} - φ♯_{σ(k-1)} g_k) H_k⁻¹`,
/// `φ♯_{σ(k)} = Π_{|τ|=k} d_τ⁻¹ (-[X_1 … X_N][φ_{|σ|=k-1}]^{⊕N} g_k* + φ♯_{σ(k-1)})`.
///
/// The remaining `φ♯` of level `k` come from the elementwise dual recursion.
/// Accumulates in double-double precision and rounds once at the end.
pub fn graded_recursion(p: &ParamSpec, max_len: usize) -> SzegoFamily {
    let n = p.n_letters();
    let mut phi: BTreeMap<Word, XPoly> = BTreeMap::new();
    let mut sharp: BTreeMap<Word, XPoly> = BTreeMap::new();
    phi.insert(Word::empty(), XPoly::one());
    sharp.insert(Word::empty(), XPoly::one());
    for level in 1..=max_len {
        let level_words = words::words_of_length(n, level);
        let gammas: Vec<Xc> = level_words.iter().map(|w| Xc::from_c64(p.gamma(w))).collect();
        let (g, h) = extended_graded_data(&gammas);
        let top_prev = sharp[&words::sigma_max(n, level - 1)].clone();
        let shifted: Vec<XPoly> =
            level_words.iter().map(|w| phi[&w.tail()].mul_left_letter(w.first().expect("nonempty"))).collect();

        // row system Φ H = R with H upper triangular, solved column by column
        let mut solved: Vec<XPoly> = Vec::with_capacity(level_words.len());
        for m in 0..level_words.len() {
            let mut terms: Vec<(Xc, &XPoly)> = vec![(Xc::ONE, &shifted[m]), (-g[m], &top_prev)];
            terms.extend((0..m).map(|l| (-h[l][m], &solved[l])));
            let rhs = XPoly::combine(&terms);
            let inv = Xc::ONE / h[m][m];
            solved.push(XPoly::combine(&[(inv, &rhs)]));
        }
        for (w, poly) in level_words.iter().zip(solved) {
            phi.insert(w.clone(), poly);
        }

        let scale = gammas.iter().fold(Xf::ONE, |acc, &gm| acc / xprec::defect(gm));
        let mut terms: Vec<(Xc, &XPoly)> =
            shifted.iter().zip(&g).map(|(s, gm)| (-(gm.conj().scale(scale)), s)).collect();
        terms.push((Xc::real(scale), &top_prev));
        let top = XPoly::combine(&terms);

        for (m, w) in level_words.iter().enumerate().take(level_words.len() - 1) {
            let pred = words::predecessor(w, n).expect("nonempty");
            let inv_d = Xc::real(Xf::ONE / xprec::defect(gammas[m]));
            let next = XPoly::combine(&[(-(gammas[m].conj() * inv_d), &shifted[m]), (inv_d, &sharp[&pred])]);
            sharp.insert(w.clone(), next);
        }
        sharp.insert(words::sigma_max(n, level), top);
    }
    SzegoFamily::from_extended(n, max_len, &phi, &sharp)
}

/// `g = L({γ})` and the upper-triangular `H = D({γ})` in double-double.
fn extended_graded_data(r: &[Xc]) -> (Vec<Xc>, Vec<Vec<Xc>>) {
    let m = r.len();
    let rho: Vec<Xf> = r.iter().map(|&x| xprec::defect(x)).collect();
    let mut g = Vec::with_capacity(m);
    let mut prefix = Xf::ONE;
    for k in 0..m {
        g.push(r[k].scale(prefix));
        prefix = prefix * rho[k];
    }
    let mut h = vec![vec![Xc::ZERO; m]; m];
    for col in 0..m {
        let mut suffix = Xf::ONE;
        for row in (0..col).rev() {
            h[row][col] = -(r[row].conj().scale(suffix) * r[col]);
            suffix = suffix * rho[row];
        }
        h[col][col] = Xc::real(rho[col]);
    }
    (g, h)
}

/// Words up to `sigma` and their Gram matrix, checked positive definite.
fn checked_gram(m: &MomentSpec, sigma: &Word) -> Result<(Vec<Word>, CMatrix)> {
    let n = m.n_letters();
    sigma.check(n)?;
    let mut ws = words::enumerate_words(n, sigma.len());
    ws.truncate(words::index_of(sigma, n) + 1);
    let g = kernel::gram(m, &ws);
    linalg::cholesky(&g)?;
    Ok((ws, g))
}

fn lift(g: &CMatrix) -> XMat {
    (0..g.rows()).map(|i| (0..g.cols()).map(|j| Xc::from_c64(g[(i, j)])).collect()).collect()
}

fn minor(a: &XMat, rows: core::ops::Range<usize>, skip_col: usize) -> XMat {
    a[rows].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != skip_col).map(|(_, &v)| v).collect()).collect()
}

fn principal(a: &XMat, range: core::ops::Range<usize>) -> XMat {
    a[range.clone()].iter().map(|r| r[range.clone()].to_vec()).collect()
}

fn signed(x: Xc, negative: bool) -> Xc {
    if negative {
        -x
    } else {
        x
    }
}

/// Coefficients of `φ_σ` for the last word of `ws`, expanding
/// `det[⟨X_ρ, X_τ⟩ rows for ρ ≺ σ ; X_τ]` along its last row.
fn det_poly_coeffs(g: &XMat) -> Vec<Xc> {
    let j = g.len() - 1;
    let norm = (xprec::determinant(&principal(g, 0..j)).re * xprec::determinant(g).re).sqrt();
    let inv = Xc::real(Xf::ONE / norm);
    (0..=j).map(|b| signed(xprec::determinant(&minor(g, 0..j, b)), (j + b) % 2 == 1) * inv).collect()
}

/// Coefficients of `φ♯_σ`, expanding along the first row.
fn det_sharp_coeffs(g: &XMat) -> Vec<Xc> {
    let j = g.len() - 1;
    let norm = (xprec::determinant(&principal(g, 1..j + 1)).re * xprec::determinant(g).re).sqrt();
    let inv = Xc::real(Xf::ONE / norm);
    (0..=j).map(|b| signed(xprec::determinant(&minor(g, 1..j + 1, b)), b % 2 == 1) * inv).collect()
}

fn round_dense(n_letters: usize, ws: &[Word], coeffs: &[Xc]) -> NcPoly {
    let dense: Vec<C64> = coeffs.iter().map(|c| c.to_c64()).collect();
    NcPoly::from_dense(n_letters, ws, &dense)
}

/// `φ_σ = det[⟨X_ρ, X_τ⟩ rows for ρ ≺ σ ; X_τ] / sqrt(D_{σ-1} D_σ)`, with the
/// determinant expanded along the indeterminate (last) row.
pub fn det_formula_poly(m: &MomentSpec, sigma: &Word) -> Result<NcPoly> {
    let (ws, g) = checked_gram(m, sigma)?;
    Ok(round_dense(m.n_letters(), &ws, &det_poly_coeffs(&lift(&g))))
}

/// The dual `φ♯_σ`: orthogonal to every `X_τ` with `∅ ≺ τ ⪯ σ`, unit norm and
/// positive constant term; the determinant is expanded along its first row.
pub fn det_formula_sharp(m: &MomentSpec, sigma: &Word) -> Result<NcPoly> {
    let (ws, g) = checked_gram(m, sigma)?;
    Ok(round_dense(m.n_letters(), &ws, &det_sharp_coeffs(&lift(&g))))
}

fn det_family_from_gram(n: usize, max_len: usize, g: &XMat) -> SzegoFamily {
    let ws = words::enumerate_words(n, max_len);
    let mut fam = SzegoFamily::base(n, max_len);
    for (j, w) in ws.iter().enumerate().skip(1) {
        let block = principal(g, 0..j + 1);
        fam.phi.insert(w.clone(), round_dense(n, &ws[..=j], &det_poly_coeffs(&block)));
        fam.phi_sharp.insert(w.clone(), round_dense(n, &ws[..=j], &det_sharp_coeffs(&block)));
    }
    fam
}

/// The whole family from the determinant formulas applied to `m`.
pub fn det_family(m: &MomentSpec, max_len: usize) -> Result<SzegoFamily> {
    let n = m.n_letters();
    let (_, g) = checked_gram(m, &words::sigma_max(n, max_len))?;
    Ok(det_family_from_gram(n, max_len, &lift(&g)))
}

/// Moments of `p` up to `max_len` in double-double, one length at a time.
fn extended_moments(p: &ParamSpec, max_len: usize) -> BTreeMap<Word, Xc> {
    let n = p.n_letters();
    let mut s: BTreeMap<Word, Xc> = BTreeMap::new();
    s.insert(Word::empty(), Xc::ONE);
    for level in 1..=max_len {
        let ws = words::enumerate_words(n, level);
        let rest = &ws[1..];
        let g = extended_gram(&s, rest);
        let m = rest.len();
        let mut l = vec![vec![Xc::ZERO; m]; m];
        for i in 0..m {
            for j in 0..=i {
                let acc = (0..j).fold(g[i][j], |acc, k| acc - l[i][k] * l[j][k].conj());
                l[i][j] = if i == j { Xc::real(acc.re.sqrt()) } else { acc / l[j][j] };
            }
        }
        let mut y = vec![Xc::ZERO; m];
        let mut cross = Xf::ZERO;
        for (mi, w) in rest.iter().enumerate() {
            if w.len() == level {
                let mut proj = Xc::ZERO;
                for k in 0..mi {
                    proj = proj + (y[k] * l[mi][k]).conj();
                }
                let scale = (Xf::ONE - cross).sqrt() * l[mi][mi].re;
                s.insert(w.clone(), proj + Xc::from_c64(p.gamma(w)).scale(scale));
            }
            let mut v = s[w].conj();
            for k in 0..mi {
                v = v - l[mi][k] * y[k];
            }
            y[mi] = v / l[mi][mi];
            cross = cross + y[mi].norm_sqr();
        }
    }
    s
}

fn extended_gram(s: &BTreeMap<Word, Xc>, ws: &[Word]) -> XMat {
    let get = |w: &[usize]| s.get(&Word::from_letters(w)).copied().unwrap_or(Xc::ZERO);
    ws.iter()
        .map(|a| {
            ws.iter()
                .map(|b| {
                    let (x, y) = (a.letters(), b.letters());
                    let k = x.iter().zip(y).take_while(|(u, v)| u == v).count();
                    let (x, y) = (&x[k..], &y[k..]);
                    if x.is_empty() {
                        get(y)
                    } else if y.is_empty() {
                        get(x).conj()
                    } else {
                        Xc::ZERO
                    }
                })
                .collect()
        })
        .collect()
}

/// Generation path for [`family`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Recursive,
    Graded,
    Determinant,
}

pub fn family(p: &ParamSpec, max_len: usize, route: Route) -> Result<SzegoFamily> {
    match route {
        Route::Recursive => Ok(szego_recursion(p, max_len)),
        Route::Graded => Ok(graded_recursion(p, max_len)),
        Route::Determinant => {
            let ws = words::enumerate_words(p.n_letters(), max_len);
            let g = extended_gram(&extended_moments(p, max_len), &ws);
            Ok(det_family_from_gram(p.n_letters(), max_len, &g))
        }
    }
}

/// `max |⟨φ_σ, φ_τ⟩ - δ_{στ}|` of a family against the kernel with moments `m`.
pub fn family_orthonormality_residual(fam: &SzegoFamily, m: &MomentSpec) -> f64 {
    let ws = words::enumerate_words(fam.n_letters, fam.max_len);
    let g = kernel::gram(m, &ws);
    let c = fam.coefficient_matrix();
    let inner = &(&c.adjoint() * &g) * &c;
    (&inner - &CMatrix::identity(ws.len())).max_abs()
}

/// Orthonormality defect of [`szego_recursion`] against [`kernel::synthesize_moments`].
pub fn orthonormality_residual(p: &ParamSpec, max_len: usize) -> f64 {
    let fam = szego_recursion(p, max_len);
    family_orthonormality_residual(&fam, &kernel::synthesize_moments(p, max_len))
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

    fn params(n: usize, pairs: &[(&str, f64)]) -> ParamSpec {
        ParamSpec::new(n, pairs.iter().map(|(s, g)| (w(s), r(*g))).collect()).unwrap()
    }

    fn close(p: &NcPoly, expected: &[(&str, f64)], tol: f64) {
        let q = NcPoly::from_terms(p.n_letters(), expected.iter().map(|(s, c)| (w(s), r(*c)))).unwrap();
        let diff = p.sub(&q).unwrap();
        for (word, c) in diff.terms() {
            assert!(c.norm() < tol, "{word:?}: {c}");
        }
    }

    #[test]
    fn worked_example() {
        let (g1, g2, g11) = (0.6, 0.5, 0.3);
        let p = params(2, &[("1", g1), ("2", g2), ("11", g11)]);
        let (d1, d2, d11) = (0.8, 0.75_f64.sqrt(), 0.91_f64.sqrt());
        let fam = szego_recursion(&p, 2);
        close(fam.phi(&w("1")).unwrap(), &[("", -g1 / d1), ("1", 1.0 / d1)], 1e-12);
        close(fam.phi(&w("2")).unwrap(), &[("", -g2 / (d1 * d2)), ("1", g1 * g2 / (d1 * d2)), ("2", 1.0 / d2)], 1e-12);
        close(
            fam.phi(&w("11")).unwrap(),
            &[
                ("", -g11 / (d1 * d2 * d11)),
                ("1", -g1 / (d1 * d11) + g11 * g1 / (d1 * d2 * d11)),
                ("2", g11 * g2 / (d2 * d11)),
                ("11", 1.0 / (d11 * d1)),
            ],
            1e-12,
        );
        assert_eq!(fam.phi(&Word::empty()), Some(&NcPoly::one(2)));
        assert_eq!(fam.phi_sharp(&Word::empty()), Some(&NcPoly::one(2)));
    }

    #[test]
    fn determinant_formula_examples() {
        let p = params(2, &[("1", 0.6), ("2", 0.5)]);
        let m = kernel::synthesize_moments(&p, 1);
        close(&det_formula_poly(&m, &w("2")).unwrap(), &[("", -0.7216878), ("1", 0.4330127), ("2", 1.1547005)], 1e-7);
        close(&det_formula_poly(&m, &w("1")).unwrap(), &[("", -0.75), ("1", 1.25)], 1e-12);
        assert_eq!(det_formula_poly(&m, &Word::empty()).unwrap(), NcPoly::one(2));
        let bad = MomentSpec::new(2, [(w("1"), r(0.9)), (w("2"), r(0.9))].into_iter().collect()).unwrap();
        assert!(matches!(det_formula_poly(&bad, &w("2")), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn leading_coefficients() {
        let p = params(2, &[("1", 0.6), ("2", 0.5), ("11", 0.3), ("12", 0.2)]);
        let lc = leading_coeff(&p, &w("11"));
        assert!((lc - 1.0 / (0.8 * 0.91_f64.sqrt())).abs() < 1e-15);
        assert_eq!(leading_coeff(&params(2, &[("2", 0.4)]), &w("1")), 1.0);
        assert!((leading_coeff(&p, &w("12")) - 1.178511).abs() < 1e-6);
        let fam = szego_recursion(&p, 2);
        for (word, phi) in fam.phis() {
            let (top, c) = phi.leading_term().unwrap();
            assert_eq!(top, word);
            assert!(c.im == 0.0 && c.re > 0.0);
            assert!((c.re - leading_coeff(&p, word)).abs() < 1e-12 * c.re);
        }
    }

    #[test]
    fn graded_data_examples() {
        let (g1, g2) = (C64::new(0.6, 0.2), C64::new(-0.1, 0.5));
        let p = ParamSpec::new(2, [(w("1"), g1), (w("2"), g2)].into_iter().collect()).unwrap();
        let (g, h) = graded_data(&p, 1).unwrap();
        let d1 = (1.0 - g1.norm_sqr()).sqrt();
        let d2 = (1.0 - g2.norm_sqr()).sqrt();
        assert_eq!(g, vec![g1, g2 * d1]);
        assert_eq!(h, CMatrix::from_vec(2, 2, vec![r(d1), -g1.conj() * g2, r(0.0), r(d2)]));

        let m = kernel::synthesize_moments(&p, 1);
        assert!((m.moment(&w("1")) - g[0]).norm() < 1e-15);
        assert!((m.moment(&w("2")) - g[1]).norm() < 1e-15);

        let (g0, h0) = graded_data(&ParamSpec::zero(3), 2).unwrap();
        assert!(g0.iter().all(|x| *x == r(0.0)));
        assert_eq!(h0, CMatrix::identity(9));
        assert!(graded_data(&p, 0).is_err());
    }

    #[test]
    fn graded_matches_recursion() {
        let p = params(2, &[("1", 0.6), ("2", 0.5), ("11", 0.3), ("12", 0.1), ("21", 0.2), ("22", -0.4)]);
        let a = szego_recursion(&p, 2);
        let b = graded_recursion(&p, 2);
        assert!(a.max_phi_diff(&b) < 1e-12);
        assert!(a.max_phi_sharp_diff(&b) < 1e-12);

        let zero = graded_recursion(&ParamSpec::zero(2), 3);
        for (word, phi) in zero.phis() {
            assert_eq!(phi, &NcPoly::monomial(2, word.clone(), r(1.0)));
        }
    }

    #[test]
    fn orthonormality_examples() {
        assert_eq!(orthonormality_residual(&ParamSpec::zero(2), 3), 0.0);
        let p = params(2, &[("1", 0.6), ("2", 0.5), ("11", 0.3), ("12", 0.1), ("21", 0.2), ("22", -0.4)]);
        assert!(orthonormality_residual(&p, 2) < 1e-10);
        let fam = szego_recursion(&ParamSpec::zero(2), 0);
        assert_eq!(fam.phis().count(), 1);
    }

    #[test]
    fn routes_agree() {
        let p = params(2, &[("1", 0.6), ("2", 0.5), ("11", 0.3), ("22", -0.4)]);
        let a = family(&p, 2, Route::Recursive).unwrap();
        for route in [Route::Graded, Route::Determinant] {
            let b = family(&p, 2, route).unwrap();
            assert!(a.max_phi_diff(&b) < 1e-10);
            assert!(a.max_phi_sharp_diff(&b) < 1e-10);
        }
    }
}
