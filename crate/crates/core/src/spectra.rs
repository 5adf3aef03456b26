//! Eigenvalues and symmetric functions of eigenvalues.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::domain;
use crate::scalar::Scalar;
use crate::symmat::{IndexSet, SymMatrix};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_THRESHOLD: f64 = 1e-13;

/// Eigenvalues in ascending order, optionally with eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// Row-major `n x n` orthogonal matrix; column `j` belongs to `values[j]`.
    pub vectors: Option<Vec<f64>>,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Q diag(values) Q^T`, when vectors are present.
    pub fn reconstruct(&self) -> Option<SymMatrix<f64>> {
        let q = self.vectors.as_ref()?;
        Some(compose(q, &self.values))
    }

    /// Number of eigenvalues below `-tol`, within `[-tol, tol]`, above `tol`.
    pub fn inertia(&self, tol: f64) -> (usize, usize, usize) {
        let neg = self.values.iter().filter(|&&v| v < -tol).count();
        let pos = self.values.iter().filter(|&&v| v > tol).count();
        (neg, self.values.len() - neg - pos, pos)
    }
}

/// `Q diag(values) Q^T` for a row-major `Q`.
pub(crate) fn compose(q: &[f64], values: &[f64]) -> SymMatrix<f64> {
    let n = values.len();
    SymMatrix::from_fn(n, |i, j| {
        (0..n).map(|l| q[i * n + l] * values[l] * q[j * n + l]).sum()
    })
}

/// Sorted eigenvalues of a symmetric matrix (cyclic Jacobi).
pub fn eigenvalues_sym(m: &SymMatrix<f64>) -> Result<Spectrum> {
    jacobi(m, false)
}

/// Sorted eigenvalues with the orthogonal factor.
pub fn eigen_decomposition(m: &SymMatrix<f64>) -> Result<Spectrum> {
    jacobi(m, true)
}

pub(crate) fn min_eigenvalue(m: &SymMatrix<f64>) -> Result<f64> {
    Ok(eigenvalues_sym(m)?.min())
}

fn jacobi(m: &SymMatrix<f64>, want_vectors: bool) -> Result<Spectrum> {
    let n = m.n();
    let mut a = m.as_slice().to_vec();
    if a.iter().any(|x| !x.is_finite()) {
        return Err(domain("matrix has non-finite entries"));
    }
    let mut v = vec![0.0; if want_vectors { n * n } else { 0 }];
    if want_vectors {
        for i in 0..n {
            v[i * n + i] = 1.0;
        }
    }
    let norm = m.frobenius_norm();
    let threshold = OFF_DIAGONAL_THRESHOLD * norm;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a, n);
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.is_infinite() {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, n, p, q, c, s);
                if want_vectors {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a, n) > threshold {
        return Err(Error::NoConvergence {
            iterations: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .partial_cmp(&a[j * n + j])
            .unwrap_or(Ordering::Equal)
    });
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = want_vectors.then(|| {
        let mut sorted = vec![0.0; n * n];
        for (col, &src) in order.iter().enumerate() {
            for row in 0..n {
                sorted[row * n + col] = v[row * n + src];
            }
        }
        sorted
    });
    Ok(Spectrum { values, vectors })
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += 2.0 * a[i * n + j] * a[i * n + j];
        }
    }
    s.sqrt()
}

/// `A <- J^T A J` for the rotation zeroing `a[p][q]`.
fn rotate(a: &mut [f64], n: usize, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = c * akp - s * akq;
        a[k * n + q] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = c * apk - s * aqk;
        a[q * n + k] = s * apk + c * aqk;
    }
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;
}

/// Coefficients `c[0..=n]` with `c[0] = 1`: either `c_l(X)` (sums of
/// principal `l x l` minors) or `e_l(x)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct CoeffVector<T = f64>(Vec<T>);

impl<T: Scalar> CoeffVector<T> {
    pub fn new(c: Vec<T>) -> Result<Self> {
        match c.first() {
            Some(c0) if *c0 == T::one() => Ok(CoeffVector(c)),
            _ => Err(domain("coefficient vector must start with 1")),
        }
    }

    /// Degree `n` (length minus one).
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn get(&self, l: usize) -> &T {
        &self.0[l]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn to_f64(&self) -> CoeffVector<f64> {
        CoeffVector(self.0.iter().map(Scalar::to_f64).collect())
    }
}

/// `e_0(x), .., e_n(x)` by the one-pass recurrence
/// `e_l(x_1..x_m) = e_l(x_1..x_{m-1}) + x_m e_{l-1}(x_1..x_{m-1})`.
pub fn elementary_symmetric_all<T: Scalar>(x: &[T]) -> CoeffVector<T> {
    let n = x.len();
    let mut e = vec![T::zero(); n + 1];
    e[0] = T::one();
    for (m, xm) in x.iter().enumerate() {
        for l in (1..=m + 1).rev() {
            let add = xm.clone() * e[l - 1].clone();
            e[l] = e[l].clone() + add;
        }
    }
    CoeffVector(e)
}

/// `e_l(x)` for `0 <= l <= n`.
pub fn elementary_symmetric<T: Scalar>(x: &[T], l: usize) -> Result<T> {
    if l > x.len() {
        return Err(domain(format!("degree {l} exceeds vector length {}", x.len())));
    }
    let n = x.len();
    // Only the first l+1 entries of the recurrence are needed.
    let mut e = vec![T::zero(); l + 1];
    e[0] = T::one();
    for (m, xm) in x.iter().enumerate() {
        for j in (1..=l.min(m + 1)).rev() {
            let add = xm.clone() * e[j - 1].clone();
            e[j] = e[j].clone() + add;
        }
    }
    debug_assert!(l <= n);
    Ok(e[l].clone())
}

/// `c_l(M) = e_l(lambda(M))`, computed from the spectrum.
pub fn char_poly_coeffs(m: &SymMatrix<f64>) -> Result<CoeffVector<f64>> {
    let spectrum = eigenvalues_sym(m)?;
    Ok(elementary_symmetric_all(&spectrum.values))
}

/// `c_l(M) = sum of principal l x l minors`; exact in exact mode.
pub fn char_poly_coeffs_by_minors<T: Scalar>(m: &SymMatrix<T>) -> CoeffVector<T> {
    let n = m.n();
    let mut c = vec![T::zero(); n + 1];
    c[0] = T::one();
    for (l, slot) in c.iter_mut().enumerate().skip(1) {
        *slot = IndexSet::subsets(n, l).fold(T::zero(), |acc, s| {
            acc + m.principal_minor(&s).expect("subset within range")
        });
    }
    CoeffVector(c)
}

/// Power sums `m_0, .., m_upto` of the roots of
/// `x^n - c_1 x^{n-1} + c_2 x^{n-2} - ... + (-1)^n c_n`, by Newton's identities.
///
/// `m_0 = n`. No roots are extracted.
pub fn power_sums_from_coeffs(c: &CoeffVector<f64>, upto: usize) -> Result<Vec<f64>> {
    if upto < 1 {
        return Err(domain("need at least one power sum"));
    }
    let n = c.degree();
    let e = c.as_slice();
    let mut m = vec![0.0; upto + 1];
    m[0] = n as f64;
    for k in 1..=upto {
        let mut s = 0.0;
        for i in 1..=k.min(n) {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            if i < k {
                s += sign * e[i] * m[k - i];
            } else {
                s += sign * k as f64 * e[i];
            }
        }
        m[k] = s;
    }
    Ok(m)
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    s
}

/// `d` is majorized by `lambda`: sorted descending, every proper prefix sum
/// of `d` is at most that of `lambda`, and the totals agree (relative 1e-10).
pub fn majorization_check(d: &[f64], lambda: &[f64]) -> Result<bool> {
    if d.len() != lambda.len() {
        return Err(domain("length mismatch"));
    }
    let ds = sorted_desc(d);
    let ls = sorted_desc(lambda);
    let scale = ls.iter().chain(ds.iter()).map(|x| x.abs()).sum::<f64>().max(1.0);
    let tol = 1e-10 * scale;
    let (mut pd, mut pl) = (0.0, 0.0);
    for j in 0..ds.len() {
        pd += ds[j];
        pl += ls[j];
        if j + 1 < ds.len() && pd > pl + tol {
            return Ok(false);
        }
    }
    Ok((pd - pl).abs() <= tol)
}

/// A symmetric matrix with diagonal `d` and eigenvalues `lambda`.
pub fn schur_horn_realize(d: &[f64], lambda: &[f64]) -> Result<SymMatrix<f64>> {
    Ok(schur_horn_with_basis(d, lambda)?.0)
}

/// Schur-Horn realization together with its orthogonal factor.
///
/// Returns `(M, Q)` with `M = Q diag(lambda) Q^T` (`lambda` in the given
/// order, `Q` row-major) and `diag(M) = d`.
///
/// Construction: start from `diag(lambda)` and repeatedly take the largest
/// outstanding target `t`. Two active diagonal values `a >= t >= b`, adjacent
/// in sorted order, are mixed by a plane rotation so one of them becomes `t`
/// and the other `a + b - t`; the finished index leaves the active set. The
/// active block stays diagonal, so the remaining targets are still majorized.
pub fn schur_horn_with_basis(d: &[f64], lambda: &[f64]) -> Result<(SymMatrix<f64>, Vec<f64>)> {
    if !majorization_check(d, lambda)? {
        return Err(domain("diagonal is not majorized by the spectrum"));
    }
    let n = d.len();
    if n == 0 {
        return Err(domain("empty input"));
    }
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        a[i * n + i] = lambda[i];
    }
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        w[i * n + i] = 1.0;
    }

    let mut targets: Vec<usize> = (0..n).collect();
    targets.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).unwrap_or(Ordering::Equal));
    let mut active: Vec<usize> = (0..n).collect();
    // position of target i in the working matrix
    let mut slot = vec![0usize; n];

    for (step, &target) in targets.iter().enumerate() {
        if step + 1 == n {
            slot[target] = active[0];
            break;
        }
        let t = d[target];
        active.sort_by(|&i, &j| a[j * n + j].partial_cmp(&a[i * n + i]).unwrap_or(Ordering::Equal));
        let p = (0..active.len() - 1)
            .find(|&p| a[active[p + 1] * n + active[p + 1]] <= t)
            .unwrap_or(active.len() - 2);
        let (u, v) = (active[p], active[p + 1]);
        let (au, av) = (a[u * n + u], a[v * n + v]);
        if au - av > 0.0 {
            let c2 = ((t - av) / (au - av)).clamp(0.0, 1.0);
            let c = c2.sqrt();
            let s = (1.0 - c2).sqrt();
            // columns: u' = c u + s v, v' = -s u + c v
            for k in 0..n {
                let (xu, xv) = (a[k * n + u], a[k * n + v]);
                a[k * n + u] = c * xu + s * xv;
                a[k * n + v] = -s * xu + c * xv;
                let (wu, wv) = (w[k * n + u], w[k * n + v]);
                w[k * n + u] = c * wu + s * wv;
                w[k * n + v] = -s * wu + c * wv;
            }
            for k in 0..n {
                let (xu, xv) = (a[u * n + k], a[v * n + k]);
                a[u * n + k] = c * xu + s * xv;
                a[v * n + k] = -s * xu + c * xv;
            }
        }
        slot[target] = u;
        active.retain(|&x| x != u);
    }

    let m = SymMatrix::from_fn(n, |i, j| a[slot[i] * n + slot[j]]);
    // M = P W^T diag(lambda) W P^T, so Q = P W^T.
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        for l in 0..n {
            q[i * n + l] = w[l * n + slot[i]];
        }
    }
    Ok((m, q))
}

/// Cauchy interlacing for `A|_S` with `|S| = k`, eigenvalues ascending:
/// `lambda_i(A) <= lambda_i(A|_S) <= lambda_{n-k+i}(A)`, to tolerance 1e-9.
pub fn interlacing_check(m: &SymMatrix<f64>, s: &IndexSet) -> Result<bool> {
    let full = eigenvalues_sym(m)?.values;
    let sub = eigenvalues_sym(&m.principal_submatrix(s)?)?.values;
    let (n, k) = (full.len(), sub.len());
    let tol = 1e-9 * m.max_abs().max(1.0);
    Ok((0..k).all(|i| full[i] <= sub[i] + tol && sub[i] <= full[n - k + i] + tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::symmat::gram_g;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn g42_spectrum() {
        let g = gram_g::<f64>(4, 2).unwrap();
        let s = eigenvalues_sym(&g).unwrap();
        assert!(close(&s.values, &[-2.0, 2.0, 2.0, 2.0], 1e-12));
    }

    #[test]
    fn gram_g_spectrum_closed_form() {
        for n in 2..9 {
            for k in 2..=n {
                let s = eigenvalues_sym(&gram_g::<f64>(n, k).unwrap()).unwrap();
                let lo = (k as f64 - n as f64) / (k as f64 - 1.0);
                let hi = k as f64 / (k as f64 - 1.0);
                assert!((s.values[0] - lo).abs() < 1e-12, "n={n} k={k}");
                assert!(s.values[1..].iter().all(|v| (v - hi).abs() < 1e-12));
            }
        }
    }

    #[test]
    fn diagonal_spectrum_is_sorted_diagonal() {
        let m = SymMatrix::from_diagonal(&[3.0, -1.0, 2.0]);
        assert_eq!(eigenvalues_sym(&m).unwrap().values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn eigenvectors_reconstruct() {
        let m = SymMatrix::from_fn(5, |i, j| ((i + 2 * j) % 7) as f64 - 3.0);
        let s = eigen_decomposition(&m).unwrap();
        let r = s.reconstruct().unwrap();
        let diff = r.add(&m.scaled(&-1.0)).unwrap().frobenius_norm();
        assert!(diff <= 1e-9 * m.frobenius_norm());
    }

    #[test]
    fn elementary_symmetric_examples() {
        assert_eq!(elementary_symmetric(&[2.0, 2.0, 2.0, -2.0], 2).unwrap(), 0.0);
        assert_eq!(elementary_symmetric(&[5.0, -7.0], 0).unwrap(), 1.0);
        let x: Vec<Rational> = [3, 3, 3, 3]
            .iter()
            .map(|&p| Rational::from_ratio(p, 2))
            .chain(core::iter::once(Rational::from_ratio(-1, 1)))
            .collect();
        assert_eq!(elementary_symmetric(&x, 3).unwrap(), Rational::from_ratio(0, 1));
        assert!(elementary_symmetric(&[1.0], 2).is_err());
    }

    #[test]
    fn char_poly_examples() {
        let c = char_poly_coeffs(&SymMatrix::<f64>::identity(3)).unwrap();
        assert!(close(c.as_slice(), &[1.0, 3.0, 3.0, 1.0], 1e-12));
        let c = char_poly_coeffs(&gram_g::<f64>(4, 2).unwrap()).unwrap();
        assert!(close(c.as_slice(), &[1.0, 4.0, 0.0, -16.0, -16.0], 1e-11));
        let exact = char_poly_coeffs_by_minors(&gram_g::<Rational>(4, 2).unwrap());
        let want: Vec<Rational> = [1, 4, 0, -16, -16].iter().map(|&v| Rational::from_i64(v)).collect();
        assert_eq!(exact.as_slice(), want.as_slice());
        let c = char_poly_coeffs(&SymMatrix::from_diagonal(&[1.0, 2.0])).unwrap();
        assert!(close(c.as_slice(), &[1.0, 3.0, 2.0], 1e-14));
    }

    #[test]
    fn newton_identity_examples() {
        let c = elementary_symmetric_all(&[1.0; 4]);
        let m = power_sums_from_coeffs(&c, 6).unwrap();
        assert!(close(&m[1..], &[4.0; 6], 1e-12));
        let c = elementary_symmetric_all(&[2.0, 2.0, 2.0, -2.0]);
        let m = power_sums_from_coeffs(&c, 4).unwrap();
        assert!(close(&m[1..], &[4.0, 16.0, 16.0, 64.0], 1e-12));
        let c = elementary_symmetric_all(&[0.0; 4]);
        assert!(power_sums_from_coeffs(&c, 5).unwrap()[1..].iter().all(|&v| v == 0.0));
        assert!(power_sums_from_coeffs(&c, 0).is_err());
    }

    #[test]
    fn majorization_examples() {
        assert!(majorization_check(&[1.0, 1.0], &[2.0, 0.0]).unwrap());
        assert!(!majorization_check(&[2.0, 0.0], &[1.0, 1.0]).unwrap());
        assert!(majorization_check(&[0.0, 0.0, 0.0], &[-1.0, 0.5, 0.5]).unwrap());
        assert!(!majorization_check(&[0.0, 0.0], &[1.0, 0.5]).unwrap());
        assert!(majorization_check(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn schur_horn_examples() {
        let m = schur_horn_realize(&[1.0, 1.0], &[0.0, 2.0]).unwrap();
        assert!((m.get(0, 0) - 1.0).abs() < 1e-12 && (m.get(1, 1) - 1.0).abs() < 1e-12);
        assert!((m.get(0, 1).abs() - 1.0).abs() < 1e-12);

        let lambda = [3.0, 1.0, -2.0];
        let m = schur_horn_realize(&lambda, &lambda).unwrap();
        assert_eq!(m, SymMatrix::from_diagonal(&lambda));

        let m = schur_horn_realize(&[0.0; 3], &[-1.0, 0.5, 0.5]).unwrap();
        assert!(m.diagonal().iter().all(|x| x.abs() < 1e-12));
        let s = eigenvalues_sym(&m).unwrap();
        assert!(close(&s.values, &[-1.0, 0.5, 0.5], 1e-12));

        assert!(schur_horn_realize(&[2.0, 0.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn schur_horn_basis_diagonalizes() {
        let lambda = [4.0, -1.0, 2.5, 0.5, 1.0];
        let d = [1.4; 5];
        let (m, q) = schur_horn_with_basis(&d, &lambda).unwrap();
        let r = compose(&q, &lambda);
        assert!(r.add(&m.scaled(&-1.0)).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn interlacing_examples() {
        let g = gram_g::<f64>(4, 2).unwrap();
        assert!(interlacing_check(&g, &IndexSet::full(4)).unwrap());
        assert!(interlacing_check(&g, &IndexSet::new(alloc::vec![0, 1, 2]).unwrap()).unwrap());
    }
}
