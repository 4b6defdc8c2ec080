//! Seeded random inputs for the verification suites.

use std::collections::BTreeMap;

use ncszego_core::ball;
use ncszego_core::linalg::{CMatrix, C64};
use ncszego_core::words::{self, Word};
use ncszego_core::{MatrixTuple, NcPoly, ParamSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in the closed disk of the given radius.
pub fn disk(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    C64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen::<f64>() * std::f64::consts::TAU)
}

fn square(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Parameters for every word up to `max_len`, uniform in the disk of `radius`.
pub fn params(rng: &mut ChaCha8Rng, n_letters: usize, max_len: usize, radius: f64) -> ParamSpec {
    let gamma: BTreeMap<Word, C64> =
        words::enumerate_words(n_letters, max_len).into_iter().skip(1).map(|w| (w, disk(rng, radius))).collect();
    ParamSpec::new(n_letters, gamma).expect("radius below one")
}

/// A tuple whose ball norm is uniform in `[0, radius]`.
pub fn point(rng: &mut ChaCha8Rng, n_letters: usize, dim: usize, radius: f64) -> MatrixTuple {
    let raw: Vec<CMatrix> = (0..n_letters).map(|_| CMatrix::from_fn(dim, dim, |_, _| square(rng))).collect();
    let raw = MatrixTuple::new(raw).expect("square matrices of one size");
    let scale = C64::new(rng.gen::<f64>() * radius / ball::ball_norm(&raw), 0.0);
    MatrixTuple::new(raw.matrices().iter().map(|m| m.scale(scale)).collect()).expect("same shapes")
}

pub fn poly(rng: &mut ChaCha8Rng, n_letters: usize, degree: usize) -> NcPoly {
    let terms: Vec<(Word, C64)> =
        words::enumerate_words(n_letters, degree).into_iter().map(|w| (w, disk(rng, 1.0))).collect();
    NcPoly::from_terms(n_letters, terms).expect("words in range")
}

/// Hermitian positive definite with unit diagonal.
pub fn unit_pd(rng: &mut ChaCha8Rng, size: usize) -> CMatrix {
    let b = CMatrix::from_fn(size, size + 2, |_, _| square(rng));
    let a = &(&b * &b.adjoint()) + &CMatrix::identity(size).scale(C64::new(0.05, 0.0));
    let d: Vec<f64> = (0..size).map(|i| a[(i, i)].re.sqrt()).collect();
    CMatrix::from_fn(size, size, |i, j| if i == j { C64::new(1.0, 0.0) } else { a[(i, j)] / (d[i] * d[j]) })
}
