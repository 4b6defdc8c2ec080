//! Szegő-type orthogonal polynomials in several noncommuting variables.
//!
//! Stationary positive-definite kernels on the free semigroup, their Schur
//! parameters, the orthonormal polynomials generated by the two-term
//! recursions, and the matrix-ball kernels built from them. `no_std` with
//! `alloc`.

#![no_std]

extern crate alloc;

pub mod ball;
mod error;
pub mod favard;
pub mod kernel;
pub mod lattice;
pub mod linalg;
pub mod ncpoly;
pub mod szego;
pub mod words;
mod xprec;

pub use ball::{MatrixTuple, Weight};
pub use error::{Error, Result};
pub use kernel::{MomentSpec, ParamSpec};
pub use linalg::{CMatrix, C64};
pub use ncpoly::NcPoly;
pub use szego::{Route, SzegoFamily};
pub use words::Word;
