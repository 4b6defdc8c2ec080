use core::fmt;

use alloc::string::String;

/// Errors raised by the library.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Two operands were built over different alphabets.
    AlphabetMismatch { left: usize, right: usize },
    /// A word used a letter outside `1..=n_letters`.
    LetterOutOfRange { letter: usize, n_letters: usize },
    /// An argument lies outside the domain of the operation.
    Domain(&'static str),
    /// A matrix (or a nested Gram matrix) failed the Cholesky pivot test.
    NotPositiveDefinite { index: usize, pivot: f64 },
    /// A Schur parameter with modulus `>= 1`.
    ParameterOutOfDisk { word: String, modulus: f64 },
    /// The moment of the empty word must be exactly one.
    NonUnitMoment { value: (f64, f64) },
    /// Matrix shapes do not fit together.
    DimensionMismatch { expected: usize, found: usize },
    /// A point lies outside the open noncommutative unit ball.
    NotInBall { norm: f64 },
    /// The geometric tail bound could not reach the requested tolerance.
    TruncationCap { tol: f64, cap: usize },
    /// A word string could not be decoded.
    BadWord(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::AlphabetMismatch { left, right } => {
                write!(f, "alphabet mismatch: {left} letters vs {right} letters")
            }
            Error::LetterOutOfRange { letter, n_letters } => {
                write!(f, "letter {letter} outside alphabet 1..={n_letters}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NotPositiveDefinite { index, pivot } => {
                write!(f, "not positive definite: pivot {pivot:e} at index {index}")
            }
            Error::ParameterOutOfDisk { word, modulus } => {
                write!(f, "parameter out of open disk: |gamma[{word:?}]| = {modulus}")
            }
            Error::NonUnitMoment { value } => {
                write!(f, "moment of the empty word must be 1, got {}+{}i", value.0, value.1)
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotInBall { norm } => {
                write!(f, "point not in the open unit ball (norm {norm})")
            }
            Error::TruncationCap { tol, cap } => {
                write!(f, "tolerance {tol:e} unreachable within {cap} levels")
            }
            Error::BadWord(s) => write!(f, "cannot decode word {s:?}"),
        }
    }
}

impl core::error::Error for Error {}
