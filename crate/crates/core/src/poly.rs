//! Roots of monic real polynomials.
//!
//! Coefficients are passed lowest degree first without the leading one:
//! `[c0, c1, .., c_{n-1}]` stands for `c0 + c1 x + .. + c_{n-1} x^{n-1} + x^n`.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

const MAX_QR_ITERATIONS: usize = 60;

/// `p(z)` for a monic polynomial.
pub fn eval_monic(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(1.0, 0.0), |acc, &c| acc * z + c)
}

/// `p'(z)` for a monic polynomial.
pub fn eval_monic_derivative(coeffs: &[f64], z: Complex64) -> Complex64 {
    let n = coeffs.len();
    let mut acc = Complex64::new(n as f64, 0.0);
    for i in (1..n).rev() {
        acc = acc * z + coeffs[i] * i as f64;
    }
    acc
}

pub fn eval_monic_real(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(1.0, |acc, &c| acc * x + c)
}

pub fn eval_monic_derivative_real(coeffs: &[f64], x: f64) -> f64 {
    eval_monic_derivative(coeffs, Complex64::new(x, 0.0)).re
}

/// All complex roots: eigenvalues of the balanced companion matrix followed
/// by one guarded Newton step each.
pub fn monic_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Numerical("non-finite coefficient".into()));
    }
    // 1-based upper Hessenberg companion matrix.
    let dim = n + 1;
    let mut a = vec![0.0; dim * dim];
    for j in 1..=n {
        a[dim + j] = -coeffs[n - j];
    }
    for j in 2..=n {
        a[j * dim + j - 1] = 1.0;
    }
    balance(&mut a, n);
    let raw = hessenberg_eigenvalues(&mut a, n)?;
    let mut roots: Vec<Complex64> = raw
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let gap = raw
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, w)| (z - w).norm())
                .fold(f64::INFINITY, f64::min);
            polish(coeffs, z, gap)
        })
        .collect();
    roots.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap_or(Ordering::Equal)
            .then(x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal))
    });
    Ok(roots)
}

/// One Newton step, kept only when it lowers `|p|` and stays well inside
/// the gap to the nearest other root (steps inside a cluster would break the
/// cluster's symmetric functions). Roots whose residual is already at the
/// rounding level of evaluating `p` are left alone.
fn polish(coeffs: &[f64], z: Complex64, gap: f64) -> Complex64 {
    let pz = eval_monic(coeffs, z);
    let dz = eval_monic_derivative(coeffs, z);
    if dz.norm() == 0.0 || pz.norm() <= evaluation_noise(coeffs, z.norm()) {
        return z;
    }
    let step = pz / dz;
    let next = z - step;
    if next.is_finite() && step.norm() <= 0.1 * gap && eval_monic(coeffs, next).norm() < pz.norm() {
        next
    } else {
        z
    }
}

/// Rounding error bound for Horner evaluation of a monic polynomial at a
/// point of modulus `r`.
fn evaluation_noise(coeffs: &[f64], r: f64) -> f64 {
    let n = coeffs.len();
    let abs_sum = coeffs.iter().rev().fold(1.0f64, |acc, c| acc * r + c.abs());
    4.0 * (n as f64) * f64::EPSILON * abs_sum
}

/// `1 + max |root|`, the natural magnitude for residual tests.
pub fn root_scale(roots: &[Complex64]) -> f64 {
    1.0 + roots.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

/// Whether a computed root counts as real.
///
/// Either the imaginary part is negligible, or the real part is itself a
/// root of (numerically) even multiplicity, which covers clusters that the
/// eigensolver splits into conjugate pairs.
pub fn is_real_root(coeffs: &[f64], z: Complex64, scale: f64) -> bool {
    if z.im.abs() <= 1e-9 * (1.0 + z.norm()) {
        return true;
    }
    let n = coeffs.len() as i32;
    let x = z.re;
    eval_monic_real(coeffs, x).abs() <= 1e-12 * scale.powi(n)
        && eval_monic_derivative_real(coeffs, x).abs() <= 1e-9 * scale.powi(n - 1)
}

/// Real parts of the roots, ascending, when every root is real.
pub fn real_roots(coeffs: &[f64]) -> Result<Option<Vec<f64>>> {
    let roots = monic_roots(coeffs)?;
    let scale = root_scale(&roots);
    if roots.iter().all(|&z| is_real_root(coeffs, z, scale)) {
        let mut re: Vec<f64> = roots.iter().map(|z| z.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        Ok(Some(re))
    } else {
        Ok(None)
    }
}

/// Number of roots classified as real.
pub fn count_real_roots(coeffs: &[f64]) -> Result<usize> {
    let roots = monic_roots(coeffs)?;
    let scale = root_scale(&roots);
    Ok(roots.iter().filter(|&&z| is_real_root(coeffs, z, scale)).count())
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Diagonal similarity by powers of two reducing row/column norm imbalance.
fn balance(a: &mut [f64], n: usize) {
    const RADIX: f64 = 2.0;
    let dim = n + 1;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let (mut r, mut c) = (0.0, 0.0);
            for j in 1..=n {
                if j != i {
                    c += a[j * dim + i].abs();
                    r += a[i * dim + j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let s = c + r;
                let mut f = 1.0;
                let mut g = r / RADIX;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 1..=n {
                        a[i * dim + j] *= g;
                    }
                    for j in 1..=n {
                        a[j * dim + i] *= f;
                    }
                }
            }
        }
    }
}

/// Eigenvalues of a 1-based upper Hessenberg matrix by Francis double-shift QR.
#[allow(unused_assignments)]
fn hessenberg_eigenvalues(a: &mut [f64], n: usize) -> Result<Vec<Complex64>> {
    let dim = n + 1;
    let at = |i: usize, j: usize| i * dim + j;
    let mut wr = vec![0.0; dim];
    let mut wi = vec![0.0; dim];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[at(i, j)].abs();
        }
    }

    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r) = (0.0, 0.0, 0.0);
    let (mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[at(l - 1, l - 1)].abs() + a[at(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[at(l, l - 1)].abs() + s == s {
                    a[at(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a[at(nn, nn)];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
            } else {
                y = a[at(nn - 1, nn - 1)];
                w = a[at(nn, nn - 1)] * a[at(nn - 1, nn)];
                if l == nn - 1 {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != 0.0 {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = 0.0;
                        wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn = nn.saturating_sub(2);
                } else {
                    if its == MAX_QR_ITERATIONS {
                        return Err(Error::NoConvergence { iterations: its });
                    }
                    if its > 0 && its % 10 == 0 {
                        t += x;
                        for i in 1..=nn {
                            a[at(i, i)] -= x;
                        }
                        let s = a[at(nn, nn - 1)].abs() + a[at(nn - 1, nn - 2)].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    loop {
                        z = a[at(m, m)];
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / a[at(m + 1, m)] + a[at(m, m + 1)];
                        q = a[at(m + 1, m + 1)] - z - r - s;
                        r = a[at(m + 2, m + 1)];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[at(m, m - 1)].abs() * (q.abs() + r.abs());
                        let v = p.abs()
                            * (a[at(m - 1, m - 1)].abs() + z.abs() + a[at(m + 1, m + 1)].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in m + 2..=nn {
                        a[at(i, i - 2)] = 0.0;
                        if i != m + 2 {
                            a[at(i, i - 3)] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k + 1 <= nn {
                        if k != m {
                            p = a[at(k, k - 1)];
                            q = a[at(k + 1, k - 1)];
                            r = 0.0;
                            if k != nn - 1 {
                                r = a[at(k + 2, k - 1)];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[at(k, k - 1)] = -a[at(k, k - 1)];
                                }
                            } else {
                                a[at(k, k - 1)] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                p = a[at(k, j)] + q * a[at(k + 1, j)];
                                if k != nn - 1 {
                                    p += r * a[at(k + 2, j)];
                                    a[at(k + 2, j)] -= p * z;
                                }
                                a[at(k + 1, j)] -= p * y;
                                a[at(k, j)] -= p * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                p = x * a[at(i, k)] + y * a[at(i, k + 1)];
                                if k != nn - 1 {
                                    p += z * a[at(i, k + 2)];
                                    a[at(i, k + 2)] -= p * r;
                                }
                                a[at(i, k + 1)] -= p * q;
                                a[at(i, k)] -= p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 2 || l + 1 >= nn {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_roots(r: &[f64]) -> Vec<f64> {
        // c[i] of prod (x - r_j), lowest first, leading dropped.
        let mut c = vec![1.0];
        for &x in r {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= x * ci;
            }
            c = next;
        }
        c.pop();
        c
    }

    #[test]
    fn simple_real_roots() {
        let c = from_roots(&[1.0, -2.0, 3.5, 0.25]);
        let r = real_roots(&c).unwrap().unwrap();
        for (got, want) in r.iter().zip([-2.0, 0.25, 1.0, 3.5]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn repeated_roots() {
        let c = from_roots(&[2.0, 2.0, 2.0, -2.0]);
        let r = real_roots(&c).unwrap().unwrap();
        assert!((r[0] + 2.0).abs() < 1e-10);
        assert!(r[1..].iter().all(|v| (v - 2.0).abs() < 1e-4));
        let r = real_roots(&[0.0; 4]).unwrap().unwrap();
        assert!(r.iter().all(|v| *v == 0.0));
        let r = real_roots(&from_roots(&[0.25; 4])).unwrap().unwrap();
        assert!(r.iter().all(|v| (v - 0.25).abs() < 1e-3));
    }

    #[test]
    fn complex_roots() {
        assert!(real_roots(&[1.0, 0.0, 0.0, 0.0]).unwrap().is_none());
        assert_eq!(count_real_roots(&[-1.0, 0.0, 0.0, 0.0]).unwrap(), 2);
        let roots = monic_roots(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        for z in roots {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!(eval_monic(&[1.0, 0.0, 0.0, 0.0], z).norm() < 1e-12);
        }
    }

    #[test]
    fn higher_degree() {
        let r: Vec<f64> = (1..=8).map(|i| i as f64 * 0.5 - 2.0).collect();
        let got = real_roots(&from_roots(&r)).unwrap().unwrap();
        for (g, w) in got.iter().zip(&r) {
            assert!((g - w).abs() < 1e-8);
        }
    }

    #[test]
    fn derivative() {
        let c = [1.0, -4.0, 6.0, -4.0];
        assert_eq!(eval_monic_derivative_real(&c, 1.0), 0.0);
        assert_eq!(eval_monic_derivative_real(&c, 0.0), -4.0);
    }
}
