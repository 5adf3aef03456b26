use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg;

/// Arbitrary precision rational used by exact-mode matrices.
pub type Rational = BigRational;

/// Field elements a [`SymMatrix`](crate::SymMatrix) can hold.
///
/// Implemented for `f64` (float mode) and [`Rational`] (exact mode). The
/// determinant is a per-type hook so each mode picks its own elimination:
/// partial-pivoting LU for floats, fraction-free Bareiss for rationals.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// `true` for exact arithmetic.
    const EXACT: bool;

    /// Determinant of a row-major `n x n` matrix.
    fn determinant(entries: Vec<Self>, n: usize) -> Self;

    fn to_f64(&self) -> f64;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn magnitude(&self) -> Self;

    /// Zero test. Exact types ignore `tol`.
    fn is_negligible(&self, tol: f64) -> bool;

    fn from_i64(value: i64) -> Self {
        Self::from_ratio(value, 1)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn determinant(mut entries: Vec<f64>, n: usize) -> f64 {
        linalg::lu_determinant(&mut entries, n)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_ratio(numer: i64, denom: i64) -> f64 {
        numer as f64 / denom as f64
    }

    fn magnitude(&self) -> f64 {
        if *self < 0.0 {
            -*self
        } else {
            *self
        }
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.magnitude() <= tol
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn determinant(entries: Vec<Rational>, n: usize) -> Rational {
        linalg::bareiss_determinant(entries, n)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_ratio(numer: i64, denom: i64) -> Rational {
        Rational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn magnitude(&self) -> Rational {
        self.abs()
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}
