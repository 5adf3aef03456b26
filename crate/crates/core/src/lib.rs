//! Algorithms for k-locally positive semidefinite matrices.
//!
//! A symmetric `n x n` matrix is *k-locally PSD* when every `k x k` principal
//! submatrix is positive semidefinite. This crate provides:
//!
//! - [`symmat`]: the symmetric matrix value type (floating point or exact
//!   rational), principal submatrices and minors, diagonal congruence, Schur
//!   complements and the `G(n, k)` family.
//! - [`spectra`]: a Jacobi eigensolver, elementary symmetric polynomials,
//!   characteristic polynomial coefficients, Newton identities, majorization
//!   and a constructive Schur-Horn realization.
//! - [`cones`]: membership tests for the locally PSD cone, the hyperbolicity
//!   cone of `e_k` and its matrix counterpart, plus eigenvalue and distance
//!   bounds.
//! - [`realize`]: matrices in the locally PSD cone with prescribed spectra,
//!   the `D G(n,k) D` family and seeded samplers.
//! - [`nls`]: detection and classification of nonsingular locally singular
//!   matrices.
//! - [`quartic`]: real-rootedness certificates for monic quartics and the
//!   reconstruction of `D G(4,2) D` from a characteristic polynomial.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod cones;
mod error;
mod linalg;
pub mod nls;
pub mod poly;
pub mod quartic;
pub mod realize;
mod scalar;
pub mod spectra;
pub mod symmat;

pub use error::{Error, Result};
pub use scalar::{rational_from_f64, Rational, Scalar};
pub use symmat::{IndexSet, SymMatrix};
