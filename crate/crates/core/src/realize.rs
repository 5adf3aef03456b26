//! Matrices in `S^{n,k}` with prescribed eigenvalues, the `D G(n,k) D`
//! family, and seeded samplers.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cones::{self, in_h_e, Verdict};
use crate::error::domain;
use crate::linalg;
use crate::scalar::Scalar;
use crate::spectra::{compose, eigenvalues_sym, elementary_symmetric_all, schur_horn_with_basis};
use crate::symmat::{gram_g, IndexSet, SymMatrix};
use crate::{Error, Result};

/// Draws per sample before giving up.
pub const SAMPLER_RETRY_CAP: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Route {
    /// `diag(x)`.
    Diag,
    /// Inverse of a zero-diagonal Schur-Horn matrix with spectrum `1/x`.
    SchurHornInverse,
    /// Zero-diagonal Schur-Horn matrix plus a multiple of the identity.
    ZeroDiagShift,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationResult {
    pub matrix: SymMatrix<f64>,
    /// Multiple of the identity added at the end.
    pub shift: f64,
    pub route: Route,
}

fn inf_norm(x: &[f64]) -> f64 {
    x.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn sorted(x: &[f64]) -> Vec<f64> {
    let mut s = x.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    s
}

fn check_finite(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(domain("empty vector"));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(domain("vector has non-finite entries"));
    }
    Ok(())
}

/// A matrix in `S^{n,1}` (nonnegative diagonal) with eigenvalues `x`.
pub fn realize_k1(x: &[f64], tol: f64) -> Result<RealizationResult> {
    check_finite(x)?;
    let n = x.len();
    let sum: f64 = x.iter().sum();
    if sum < -tol * inf_norm(x).max(1.0) {
        return Err(domain(format!("sum of entries is {sum} < 0; not in H(e_1)")));
    }
    let mean = sum / n as f64;
    let centered: Vec<f64> = x.iter().map(|v| v - mean).collect();
    if centered.iter().all(|&v| v == 0.0) {
        return Ok(RealizationResult {
            matrix: SymMatrix::from_diagonal(x),
            shift: 0.0,
            route: Route::Diag,
        });
    }
    // Zero target diagonal; the centered total may be off by rounding.
    let target = vec![centered.iter().sum::<f64>() / n as f64; n];
    let (_, q) = schur_horn_with_basis(&target, &centered)?;
    let m0 = compose(&q, &centered);
    Ok(RealizationResult {
        matrix: m0.shifted(&mean),
        shift: mean,
        route: Route::ZeroDiagShift,
    })
}

/// A matrix in `S^{n,n-1}` with eigenvalues `x`, for `x` on the boundary of
/// `H(e_{n-1}^n)`.
pub fn realize_boundary_nminus1(x: &[f64], tol: f64) -> Result<RealizationResult> {
    check_finite(x)?;
    let n = x.len();
    if n < 2 {
        return Err(domain("need n >= 2"));
    }
    let report = in_h_e(x, n - 1, tol)?;
    match report.verdict {
        Verdict::Boundary => {}
        Verdict::Outside => return Err(domain("vector is outside H(e_{n-1})")),
        Verdict::Inside => return Err(domain("vector is interior to H(e_{n-1}), not on its boundary")),
    }
    realize_on_boundary(x, tol)
}

fn realize_on_boundary(x: &[f64], tol: f64) -> Result<RealizationResult> {
    let n = x.len();
    let diag = RealizationResult {
        matrix: SymMatrix::from_diagonal(x),
        shift: 0.0,
        route: Route::Diag,
    };
    if x.iter().all(|&v| v >= 0.0) {
        return Ok(diag);
    }
    if x.iter().any(|&v| v == 0.0) {
        return Err(domain("boundary vector with a negative entry cannot have zero entries"));
    }
    let reciprocal: Vec<f64> = x.iter().map(|v| 1.0 / v).collect();
    let sum: f64 = reciprocal.iter().sum();
    let size: f64 = reciprocal.iter().map(|v| v.abs()).sum();
    if sum.abs() > tol.max(1e-12) * size {
        return Err(Error::InconsistentBoundary {
            reciprocal_sum: sum,
        });
    }
    // L has spectrum 1/x and (up to rounding) zero diagonal; M = L^{-1}.
    let target = vec![sum / n as f64; n];
    let (_, q) = schur_horn_with_basis(&target, &reciprocal)?;
    Ok(RealizationResult {
        matrix: compose(&q, x),
        shift: 0.0,
        route: Route::SchurHornInverse,
    })
}

/// Largest `t` with `x - t 1` in `H(e_{n-1}^n)`.
///
/// This is the smallest root of `t -> e_{n-1}(x - t 1)`, which lies in
/// `[x_(1), x_(2)]` and solves `sum 1/(x_i - t) = 0` there. The reciprocal
/// sum increases strictly on the open interval, so bisection is exact up to
/// rounding.
pub fn boundary_shift(x: &[f64]) -> Result<f64> {
    check_finite(x)?;
    if x.len() < 2 {
        return Err(domain("need n >= 2"));
    }
    let s = sorted(x);
    let (lo0, hi0) = (s[0], s[1]);
    if lo0 == hi0 {
        return Ok(lo0);
    }
    let g = |t: f64| x.iter().map(|v| 1.0 / (v - t)).sum::<f64>();
    let (mut lo, mut hi) = (lo0, hi0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = g(mid);
        if v < 0.0 {
            lo = mid;
        } else if v > 0.0 {
            hi = mid;
        } else {
            return Ok(mid);
        }
    }
    let mid = 0.5 * (lo + hi);
    Ok(if mid > lo0 && mid < hi0 { mid } else { lo })
}

/// A matrix in `S^{n,n-1}` with eigenvalues `x`, for any `x` in `H(e_{n-1}^n)`:
/// shift to the boundary, realize there, shift back.
pub fn realize_h_nminus1(x: &[f64], tol: f64) -> Result<RealizationResult> {
    check_finite(x)?;
    let n = x.len();
    if n < 2 {
        return Err(domain("need n >= 2"));
    }
    if in_h_e(x, n - 1, tol)?.verdict == Verdict::Outside {
        return Err(domain("vector is outside H(e_{n-1})"));
    }
    let t = boundary_shift(x)?.max(0.0);
    let y: Vec<f64> = x.iter().map(|v| v - t).collect();
    let base = realize_on_boundary(&y, tol)?;
    Ok(RealizationResult {
        matrix: base.matrix.shifted(&t),
        shift: t,
        route: base.route,
    })
}

/// `D G(n,k) D` with `D = diag(d)`.
pub fn dgd_family<T: Scalar>(n: usize, k: usize, d: &[T]) -> Result<SymMatrix<T>> {
    if d.len() != n {
        return Err(domain(format!("scaling vector has length {} (expected {n})", d.len())));
    }
    if let Some(i) = d.iter().position(|v| v.is_zero()) {
        return Err(domain(format!("scaling entry {i} is zero")));
    }
    gram_g::<T>(n, k)?.diagonal_congruence(d)
}

/// Sampling strategy for [`sample_s_nk`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    /// Random symmetric matrix shifted by the worst `k`-block eigenvalue.
    Rejection,
    /// Random `D G D` plus a random PSD matrix.
    Congruence,
    /// `w P + (1 - w) G(n,k)` with `P` random PSD; `w` drawn when `None`.
    PsdMix { psd_weight: Option<f64> },
}

/// Seeded generator for draw `index` of stream `seed`.
pub fn draw_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One matrix in `S^{n,k}`, deterministic in `seed`.
pub fn sample_s_nk(n: usize, k: usize, seed: u64, strategy: Strategy) -> Result<SymMatrix<f64>> {
    sample_s_nk_indexed(n, k, seed, 0, strategy)
}

/// Draw `index` of the sample sequence for `seed`.
pub fn sample_s_nk_indexed(
    n: usize,
    k: usize,
    seed: u64,
    index: u64,
    strategy: Strategy,
) -> Result<SymMatrix<f64>> {
    if k < 1 || k > n {
        return Err(domain(format!("need 1 <= k <= n (got n={n}, k={k})")));
    }
    if let Strategy::PsdMix { psd_weight: Some(w) } = strategy {
        if !(0.0..=1.0).contains(&w) {
            return Err(domain(format!("mixing weight {w} outside [0, 1]")));
        }
    }
    let mut rng = draw_rng(seed, index);
    for _ in 0..SAMPLER_RETRY_CAP {
        let m = match strategy {
            Strategy::Rejection => draw_shifted(n, k, &mut rng)?,
            Strategy::Congruence => draw_congruence(n, k, &mut rng)?,
            Strategy::PsdMix { psd_weight } => draw_mix(n, k, psd_weight, &mut rng)?,
        };
        if cones::in_s_nk(&m, k, cones::DEFAULT_TOL)?.verdict.is_member() {
            return Ok(m);
        }
    }
    Err(Error::Sampling {
        attempts: SAMPLER_RETRY_CAP,
    })
}

fn random_symmetric<R: Rng>(n: usize, rng: &mut R) -> SymMatrix<f64> {
    SymMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
}

/// `B B^T` for a random `n x r` matrix `B` with random rank `r`.
pub fn random_psd<R: Rng>(n: usize, rng: &mut R) -> SymMatrix<f64> {
    let r = rng.gen_range(1..=n);
    let b: Vec<f64> = (0..n * r).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SymMatrix::from_fn(n, |i, j| (0..r).map(|l| b[i * r + l] * b[j * r + l]).sum())
}

/// Random nonzero scaling vector with entries of magnitude in `[0.2, 2]`.
pub fn random_scaling<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let v: f64 = rng.gen_range(0.2..2.0);
            if rng.gen_bool(0.5) {
                v
            } else {
                -v
            }
        })
        .collect()
}

fn draw_shifted<R: Rng>(n: usize, k: usize, rng: &mut R) -> Result<SymMatrix<f64>> {
    let a = random_symmetric(n, rng);
    let mut worst = f64::INFINITY;
    for s in IndexSet::subsets(n, k) {
        worst = worst.min(cones::block_slack(&a, &s)?);
    }
    let shift = if worst < 0.0 { -worst } else { 0.0 };
    Ok(a.shifted(&shift))
}

fn draw_congruence<R: Rng>(n: usize, k: usize, rng: &mut R) -> Result<SymMatrix<f64>> {
    if k < 2 {
        return Ok(random_psd(n, rng));
    }
    let d = random_scaling(n, rng);
    let weight: f64 = rng.gen_range(0.0..1.0);
    let psd = random_psd(n, rng).scaled(&weight);
    dgd_family(n, k, &d)?.add(&psd)
}

fn draw_mix<R: Rng>(n: usize, k: usize, weight: Option<f64>, rng: &mut R) -> Result<SymMatrix<f64>> {
    if k < 2 {
        return Ok(random_psd(n, rng));
    }
    let w = weight.unwrap_or_else(|| rng.gen_range(0.0..1.0));
    let g = gram_g::<f64>(n, k)?;
    let p = random_psd(n, rng);
    let p = p.scaled(&(g.frobenius_norm() / p.frobenius_norm().max(f64::MIN_POSITIVE)));
    p.scaled(&w).add(&g.scaled(&(1.0 - w)))
}

/// `det G(l, k)` for `l = 0..=n`: the factor with `c_l(D G D) = g_l e_l(d^2)`.
pub fn gram_minor_constants(n: usize, k: usize) -> Vec<f64> {
    let kf = k as f64;
    (0..=n)
        .map(|l| {
            if l == 0 {
                1.0
            } else {
                (kf / (kf - 1.0)).powi(l as i32 - 1) * (kf - l as f64) / (kf - 1.0)
            }
        })
        .collect()
}

/// Outcome of [`search_dgd_spectrum`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DgdSearch {
    pub found: bool,
    /// Positive scaling with the smallest residual seen.
    pub d: Vec<f64>,
    /// Largest scaled coefficient mismatch.
    pub residual: f64,
}

/// Numerical search for `d` with `spec(D G(n,k) D) = lambda`.
///
/// Matches characteristic-polynomial coefficients `g_l e_l(w) = e_l(lambda)`
/// in `w = d^2 = u^2` by damped Gauss-Newton from seeded starts. A result is
/// `found` when the scaled residual drops below `1e-9`. No claim is made that
/// failure means no such `d` exists.
pub fn search_dgd_spectrum(lambda: &[f64], k: usize, seed: u64, restarts: usize) -> Result<DgdSearch> {
    check_finite(lambda)?;
    let n = lambda.len();
    if k < 2 || k > n {
        return Err(domain(format!("need 2 <= k <= n (got n={n}, k={k})")));
    }
    let g = gram_minor_constants(n, k);
    let scale = inf_norm(lambda).max(1.0);
    let target: Vec<f64> = elementary_symmetric_all(lambda)
        .as_slice()
        .iter()
        .enumerate()
        .map(|(l, c)| c / scale.powi(l as i32))
        .collect();
    let residuals = |u: &[f64]| -> Vec<f64> {
        let w: Vec<f64> = u.iter().map(|v| v * v / scale).collect();
        let e = elementary_symmetric_all(&w);
        (1..=n).map(|l| g[l] * e.get(l) - target[l]).collect()
    };
    let norm_inf = |r: &[f64]| inf_norm(r);

    let mut best = DgdSearch {
        found: false,
        d: vec![1.0; n],
        residual: f64::INFINITY,
    };
    let mut rng = draw_rng(seed, 0);
    for attempt in 0..restarts.max(1) {
        let mut u: Vec<f64> = if attempt == 0 {
            let mean = (lambda.iter().sum::<f64>() / n as f64).abs().max(1e-3);
            vec![mean.sqrt(); n]
        } else {
            (0..n).map(|_| rng.gen_range(0.1..2.0) * scale.sqrt()).collect()
        };
        let mut r = residuals(&u);
        let mut mu = 1e-3;
        for _ in 0..500 {
            let cost: f64 = r.iter().map(|v| v * v).sum();
            if norm_inf(&r) < 1e-13 {
                break;
            }
            let jac = dgd_jacobian(&u, &g, scale);
            let mut jtj = vec![0.0; n * n];
            let mut jtr = vec![0.0; n];
            for a in 0..n {
                for b in 0..n {
                    jtj[a * n + b] = (0..n).map(|l| jac[l * n + a] * jac[l * n + b]).sum();
                }
                jtr[a] = -(0..n).map(|l| jac[l * n + a] * r[l]).sum::<f64>();
            }
            let mut improved = false;
            for _ in 0..30 {
                let mut damped = jtj.clone();
                for a in 0..n {
                    damped[a * n + a] += mu * (1.0 + jtj[a * n + a]);
                }
                if let Ok(step) = linalg::solve(damped, jtr.clone(), n) {
                    let trial: Vec<f64> = u.iter().zip(&step).map(|(a, b)| a + b).collect();
                    let rt = residuals(&trial);
                    if rt.iter().map(|v| v * v).sum::<f64>() < cost {
                        u = trial;
                        r = rt;
                        mu = (mu * 0.3).max(1e-15);
                        improved = true;
                        break;
                    }
                }
                mu *= 10.0;
            }
            if !improved {
                break;
            }
        }
        let res = norm_inf(&r);
        if res < best.residual {
            best = DgdSearch {
                found: res < 1e-9,
                d: u.iter().map(|v| v.abs()).collect(),
                residual: res,
            };
        }
        if best.found {
            break;
        }
    }
    Ok(best)
}

/// Row-major Jacobian `d r_l / d u_i`, rows `l = 1..=n`.
fn dgd_jacobian(u: &[f64], g: &[f64], scale: f64) -> Vec<f64> {
    let n = u.len();
    let w: Vec<f64> = u.iter().map(|v| v * v / scale).collect();
    let mut jac = vec![0.0; n * n];
    for i in 0..n {
        let others: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| w[j]).collect();
        let e = elementary_symmetric_all(&others);
        for l in 1..=n {
            // d e_l(w) / d w_i = e_{l-1}(w without i)
            jac[(l - 1) * n + i] = g[l] * e.get(l - 1) * 2.0 * u[i] / scale;
        }
    }
    jac
}

/// Sorted eigenvalues of `matrix` against sorted `x`, largest deviation.
pub fn spectrum_residual(matrix: &SymMatrix<f64>, x: &[f64]) -> Result<f64> {
    let got = eigenvalues_sym(matrix)?.values;
    let want = sorted(x);
    if got.len() != want.len() {
        return Err(domain("dimension mismatch"));
    }
    Ok(got.iter().zip(&want).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
}
