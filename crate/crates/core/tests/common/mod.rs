#![allow(dead_code)]

pub mod dd;

use std::collections::BTreeMap;

use ncszego_core::linalg::{self, CMatrix, C64};
use ncszego_core::words::{self, Word};
use ncszego_core::{MatrixTuple, MomentSpec, NcPoly, ParamSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use dd::{Cdd, Dd};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn w(s: &str) -> Word {
    Word::parse(s, 9).unwrap()
}

/// Uniform in the closed complex disk of the given radius.
pub fn disk(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let t = rng.gen::<f64>() * std::f64::consts::TAU;
    C64::from_polar(r, t)
}

pub fn gaussianish(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_params(rng: &mut ChaCha8Rng, n: usize, max_len: usize, radius: f64) -> ParamSpec {
    let gamma: BTreeMap<Word, C64> =
        words::enumerate_words(n, max_len).into_iter().skip(1).map(|w| (w, disk(rng, radius))).collect();
    ParamSpec::new(n, gamma).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussianish(rng))
}

/// Random tuple rescaled to a ball norm drawn uniformly in `[0, max_norm]`.
pub fn random_point(rng: &mut ChaCha8Rng, n: usize, d: usize, max_norm: f64) -> MatrixTuple {
    let raw = MatrixTuple::new((0..n).map(|_| random_matrix(rng, d, d)).collect()).unwrap();
    let target = rng.gen::<f64>() * max_norm;
    let norm = ncszego_core::ball::ball_norm(&raw);
    let scale = c(target / norm, 0.0);
    MatrixTuple::new(raw.matrices().iter().map(|m| m.scale(scale)).collect()).unwrap()
}

/// Random Hermitian positive-definite matrix with unit diagonal.
pub fn random_unit_pd(rng: &mut ChaCha8Rng, size: usize) -> CMatrix {
    let b = random_matrix(rng, size, size + 2);
    let a = &(&b * &b.adjoint()) + &CMatrix::identity(size).scale(c(0.05, 0.0));
    let d: Vec<f64> = (0..size).map(|i| a[(i, i)].re.sqrt()).collect();
    CMatrix::from_fn(size, size, |i, j| if i == j { c(1.0, 0.0) } else { a[(i, j)] / (d[i] * d[j]) })
}

pub fn random_poly(rng: &mut ChaCha8Rng, n: usize, deg: usize) -> NcPoly {
    let terms: Vec<(Word, C64)> = words::enumerate_words(n, deg).into_iter().map(|w| (w, disk(rng, 1.0))).collect();
    NcPoly::from_terms(n, terms).unwrap()
}

/// Independent evaluation of a stationary kernel from its moments.
pub fn brute_kernel(m: &MomentSpec, a: &Word, b: &Word) -> C64 {
    let (mut x, mut y) = (a.letters().to_vec(), b.letters().to_vec());
    while !x.is_empty() && !y.is_empty() {
        if x[0] != y[0] {
            return c(0.0, 0.0);
        }
        x.remove(0);
        y.remove(0);
    }
    if x.is_empty() {
        m.moment(&Word::new(y))
    } else {
        m.moment(&Word::new(x)).conj()
    }
}

/// `⟨p, q⟩ = Σ K(σ, τ) q_τ conj(p_σ)` on dense coefficient vectors.
fn brute_inner(m: &MomentSpec, ws: &[Word], p: &[C64], q: &[C64]) -> C64 {
    let mut acc = c(0.0, 0.0);
    for (a, wa) in ws.iter().enumerate() {
        for (b, wb) in ws.iter().enumerate() {
            acc += brute_kernel(m, wa, wb) * q[b] * p[a].conj();
        }
    }
    acc
}

/// Classical Gram-Schmidt on the monomials in graded order, twice
/// re-orthogonalized, leading coefficients positive.
pub fn gram_schmidt(m: &MomentSpec, max_len: usize) -> Vec<(Word, Vec<C64>)> {
    let ws = words::enumerate_words(m.n_letters(), max_len);
    let mut out: Vec<(Word, Vec<C64>)> = Vec::new();
    for (j, wj) in ws.iter().enumerate() {
        let mut v = vec![c(0.0, 0.0); ws.len()];
        v[j] = c(1.0, 0.0);
        for _ in 0..2 {
            for (_, u) in &out {
                let proj = brute_inner(m, &ws, u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm = brute_inner(m, &ws, &v, &v).re.sqrt();
        let phase = v[j] / v[j].norm();
        for vi in v.iter_mut() {
            *vi /= phase * norm;
        }
        out.push((wj.clone(), v));
    }
    out
}

pub fn dense_diff(p: &NcPoly, ws: &[Word], v: &[C64]) -> f64 {
    p.dense(ws).iter().zip(v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

pub fn determinant_real(a: &CMatrix) -> f64 {
    linalg::determinant(a).re
}

/// Moments of the parameters `p` in double-double precision, one length at a
/// time: each new moment makes the partial correlation of `∅` and its word,
/// given the words in between, equal to the prescribed parameter.
pub fn dd_moments(p: &ParamSpec, max_len: usize) -> BTreeMap<Word, Cdd> {
    let n = p.n_letters();
    let mut s: BTreeMap<Word, Cdd> = BTreeMap::new();
    let moment = |s: &BTreeMap<Word, Cdd>, a: &Word, b: &Word| -> Cdd {
        let (x, y) = (a.letters(), b.letters());
        let k = x.iter().zip(y).take_while(|(u, v)| u == v).count();
        let (x, y) = (&x[k..], &y[k..]);
        let get = |w: &[usize]| {
            if w.is_empty() {
                Cdd::ONE
            } else {
                s.get(&Word::from_letters(w)).copied().unwrap_or(Cdd::ZERO)
            }
        };
        if x.is_empty() {
            get(y)
        } else if y.is_empty() {
            get(x).conj()
        } else {
            Cdd::ZERO
        }
    };
    for level in 1..=max_len {
        let ws = words::enumerate_words(n, level);
        let rest = &ws[1..];
        let m = rest.len();
        // Cholesky of the Gram block of nonempty words; needs moments of length < level only
        let mut l = vec![vec![Cdd::ZERO; m]; m];
        for i in 0..m {
            for j in 0..=i {
                let acc = (0..j).fold(moment(&s, &rest[i], &rest[j]), |acc, k| acc - l[i][k] * l[j][k].conj());
                if i == j {
                    l[i][i] = Cdd::real(acc.re.sqrt());
                } else {
                    l[i][j] = acc / l[j][j];
                }
            }
        }
        let mut y = vec![Cdd::ZERO; m];
        let mut cross = Dd::ZERO;
        for (mi, w) in rest.iter().enumerate() {
            if w.len() == level {
                let mut proj = Cdd::ZERO;
                for k in 0..mi {
                    proj = proj + (y[k] * l[mi][k]).conj();
                }
                let scale = (Dd::ONE - cross).sqrt() * l[mi][mi].re;
                let g = Cdd::from_c64(p.gamma(w));
                s.insert(w.clone(), proj + g.scale(scale));
            }
            let mut v = moment(&s, w, &Word::empty());
            for k in 0..mi {
                v = v - l[mi][k] * y[k];
            }
            y[mi] = v / l[mi][mi];
            cross = cross + y[mi].norm_sqr();
        }
    }
    s
}

/// Gram matrix `[K(a, b)]` from double-double moments.
pub fn dd_gram(s: &BTreeMap<Word, Cdd>, ws: &[Word]) -> Vec<Vec<Cdd>> {
    let get =
        |w: &[usize]| if w.is_empty() { Cdd::ONE } else { s.get(&Word::from_letters(w)).copied().unwrap_or(Cdd::ZERO) };
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
                        Cdd::ZERO
                    }
                })
                .collect()
        })
        .collect()
}

fn dd_matvec(g: &[Vec<Cdd>], v: &[Cdd]) -> Vec<Cdd> {
    g.iter().map(|row| row.iter().zip(v).fold(Cdd::ZERO, |acc, (a, b)| acc + *a * *b)).collect()
}

fn dd_dot(u: &[Cdd], v: &[Cdd]) -> Cdd {
    u.iter().zip(v).fold(Cdd::ZERO, |acc, (a, b)| acc + a.conj() * *b)
}

/// Gram-Schmidt on the monomials in double-double precision against `g`,
/// re-orthogonalized once, with positive leading coefficients.
pub fn dd_gram_schmidt(g: &[Vec<Cdd>]) -> Vec<Vec<C64>> {
    let n = g.len();
    let mut basis: Vec<(Vec<Cdd>, Vec<Cdd>)> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = vec![Cdd::ZERO; n];
        v[j] = Cdd::ONE;
        for _ in 0..2 {
            for (u, gu) in &basis {
                let proj = dd_dot(gu, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi = *vi - proj * *ui;
                }
            }
        }
        let gv = dd_matvec(g, &v);
        let norm = dd_dot(&v, &gv).re.sqrt();
        let v: Vec<Cdd> = v.into_iter().map(|x| Cdd { re: x.re / norm, im: x.im / norm }).collect();
        let gv = dd_matvec(g, &v);
        basis.push((v, gv));
    }
    basis.into_iter().map(|(v, _)| v.into_iter().map(Cdd::to_c64).collect()).collect()
}

/// `max |c_a* G c_b - δ_ab|` for f64 columns, accumulated in double-double.
pub fn dd_orthonormality(g: &[Vec<Cdd>], cols: &[Vec<C64>]) -> f64 {
    let lifted: Vec<Vec<Cdd>> = cols.iter().map(|c| c.iter().map(|&x| Cdd::from_c64(x)).collect()).collect();
    let images: Vec<Vec<Cdd>> = lifted.iter().map(|c| dd_matvec(g, c)).collect();
    let mut worst: f64 = 0.0;
    for (a, ca) in lifted.iter().enumerate() {
        for (b, gb) in images.iter().enumerate() {
            let mut v = dd_dot(ca, gb);
            if a == b {
                v = v - Cdd::ONE;
            }
            worst = worst.max(v.to_c64().norm());
        }
    }
    worst
}
