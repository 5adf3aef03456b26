//! Dense elimination kernels on row-major square buffers.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{Rational, Scalar};
use crate::{Error, Result};

/// Determinant by LU factorization with partial pivoting. Destroys `a`.
pub(crate) fn lu_determinant(a: &mut [f64], n: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col * n + col].abs();
        for row in col + 1..n {
            let v = a[row * n + col].abs();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            det = -det;
        }
        let p = a[col * n + col];
        det *= p;
        for row in col + 1..n {
            let factor = a[row * n + col] / p;
            if factor != 0.0 {
                for j in col + 1..n {
                    a[row * n + j] -= factor * a[col * n + j];
                }
            }
        }
    }
    det
}

/// Exact determinant of a rational matrix.
///
/// Each row is scaled by the lcm of its denominators, the resulting integer
/// matrix is reduced with Bareiss' fraction-free elimination, and the scale
/// factors are divided back out.
pub(crate) fn bareiss_determinant(entries: Vec<Rational>, n: usize) -> Rational {
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut m: Vec<BigInt> = Vec::with_capacity(n * n);
    for row in entries.chunks(n) {
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        for x in row {
            m.push(x.numer() * (&lcm / x.denom()));
        }
        scale *= lcm;
    }

    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k * n + k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                return Rational::zero();
            };
            for j in 0..n {
                m.swap(k * n + j, swap * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j];
                m[i * n + j] = v / &prev;
            }
        }
        prev = m[k * n + k].clone();
    }
    let det = sign * &m[n * n - 1];
    Rational::new(det, scale)
}

/// Inverse by Gauss-Jordan elimination, pivoting on the largest magnitude.
pub(crate) fn invert<T: Scalar>(entries: &[T], n: usize, tol: f64) -> Result<Vec<T>> {
    let mut a = entries.to_vec();
    let mut inv = vec![T::zero(); n * n];
    for i in 0..n {
        inv[i * n + i] = T::one();
    }
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r * n + col].is_zero())
            .max_by(|&r, &s| {
                let x = a[r * n + col].to_f64().abs();
                let y = a[s * n + col].to_f64().abs();
                x.partial_cmp(&y).unwrap_or(core::cmp::Ordering::Equal)
            })
            .ok_or(Error::Singular)?;
        if a[pivot * n + col].is_negligible(tol) {
            return Err(Error::Singular);
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
                inv.swap(col * n + j, pivot * n + j);
            }
        }
        let p = a[col * n + col].clone();
        for j in 0..n {
            a[col * n + j] = a[col * n + j].clone() / p.clone();
            inv[col * n + j] = inv[col * n + j].clone() / p.clone();
        }
        for row in 0..n {
            if row == col || a[row * n + col].is_zero() {
                continue;
            }
            let factor = a[row * n + col].clone();
            for j in 0..n {
                let da = factor.clone() * a[col * n + j].clone();
                a[row * n + j] = a[row * n + j].clone() - da;
                let di = factor.clone() * inv[col * n + j].clone();
                inv[row * n + j] = inv[row * n + j].clone() - di;
            }
        }
    }
    Ok(inv)
}

/// Solves `a x = b` for a dense square system (partial pivoting).
pub(crate) fn solve(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| {
                a[r * n + col]
                    .abs()
                    .partial_cmp(&a[s * n + col].abs())
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .ok_or(Error::Singular)?;
        if a[pivot * n + col] == 0.0 {
            return Err(Error::Singular);
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            b.swap(col, pivot);
        }
        for row in col + 1..n {
            let f = a[row * n + col] / a[col * n + col];
            if f != 0.0 {
                for j in col..n {
                    a[row * n + j] -= f * a[col * n + j];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[i * n + j] * x[j];
        }
        x[i] = s / a[i * n + i];
    }
    Ok(x)
}
