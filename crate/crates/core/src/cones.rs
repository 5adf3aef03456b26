//! Membership, boundary and bound computations for `S^{n,k}`,
//! `H(e_k^n)`, `H(c_k^n)` and distances to the PSD cone.
//!
//! Margins are normalized slacks so that one tolerance works across scales:
//! eigenvalue slacks are divided by `max(1, max |M_ij|)` and `e_l` slacks by
//! `max(1, |x|_inf)^l`. Verdicts read the margin through a two-sided band:
//! outside iff `margin < -tol`, boundary iff `|margin| <= tol`.

use alloc::format;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::domain;
use crate::spectra::{eigenvalues_sym, elementary_symmetric_all};
use crate::symmat::{IndexSet, SymMatrix};
use crate::Result;

/// Default membership tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Verdict {
    Inside,
    Boundary,
    Outside,
}

impl Verdict {
    pub fn from_margin(margin: f64, tol: f64) -> Self {
        if margin < -tol {
            Verdict::Outside
        } else if margin <= tol {
            Verdict::Boundary
        } else {
            Verdict::Inside
        }
    }

    pub fn is_member(self) -> bool {
        self != Verdict::Outside
    }
}

/// The constraint that attains the margin.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Certificate {
    /// Principal submatrix index set (0-based).
    Submatrix(IndexSet),
    /// Degree `l` of the elementary symmetric polynomial.
    Polynomial(usize),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MembershipReport {
    pub verdict: Verdict,
    pub margin: f64,
    pub certificate: Certificate,
    /// Every violating submatrix, filled by exhaustive scans only.
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "Vec::is_empty")
    )]
    pub violations: Vec<IndexSet>,
}

/// How `in_s_nk_with` walks the `k`-subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scan {
    /// Stop at the first violating subset (lexicographic order).
    #[default]
    FirstViolation,
    /// Visit every subset and list all violations.
    Exhaustive,
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(domain(format!("need 1 <= k <= n (got n={n}, k={k})")));
    }
    Ok(())
}

/// Normalizer for eigenvalue slacks of `m`.
pub fn eigen_scale(m: &SymMatrix<f64>) -> f64 {
    m.max_abs().max(1.0)
}

/// Membership in `S^{n,k}`: every `k x k` principal submatrix is PSD.
pub fn in_s_nk(m: &SymMatrix<f64>, k: usize, tol: f64) -> Result<MembershipReport> {
    in_s_nk_with(m, k, tol, Scan::FirstViolation)
}

pub fn in_s_nk_with(
    m: &SymMatrix<f64>,
    k: usize,
    tol: f64,
    scan: Scan,
) -> Result<MembershipReport> {
    let n = m.n();
    check_k(n, k)?;
    let scale = eigen_scale(m);
    let mut best: Option<(f64, IndexSet)> = None;
    let mut violations = Vec::new();
    for s in IndexSet::subsets(n, k) {
        let slack = block_slack(m, &s)? / scale;
        let violated = slack < -tol;
        if best.as_ref().is_none_or(|(b, _)| slack < *b) {
            best = Some((slack, s.clone()));
        }
        if violated {
            match scan {
                Scan::FirstViolation => {
                    return Ok(MembershipReport {
                        verdict: Verdict::Outside,
                        margin: slack,
                        certificate: Certificate::Submatrix(s),
                        violations,
                    })
                }
                Scan::Exhaustive => violations.push(s),
            }
        }
    }
    let (margin, set) = best.expect("at least one subset");
    let certificate = Certificate::Submatrix(violations.first().cloned().unwrap_or(set));
    Ok(MembershipReport {
        verdict: Verdict::from_margin(margin, tol),
        margin,
        certificate,
        violations,
    })
}

/// Smallest eigenvalue of `M|_S`.
pub fn block_slack(m: &SymMatrix<f64>, s: &IndexSet) -> Result<f64> {
    let block = m.principal_submatrix(s)?;
    Ok(eigenvalues_sym(&block)?.min())
}

/// Normalized slacks `e_l(x) / max(1, |x|_inf)^l` for `l = 1..=k`.
pub fn h_e_slacks(x: &[f64], k: usize) -> Result<Vec<f64>> {
    check_k(x.len(), k)?;
    let e = elementary_symmetric_all(x);
    let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    Ok((1..=k).map(|l| e.get(l) / scale.powi(l as i32)).collect())
}

/// Membership in the hyperbolicity cone `H(e_k^n)`.
pub fn in_h_e(x: &[f64], k: usize, tol: f64) -> Result<MembershipReport> {
    let slacks = h_e_slacks(x, k)?;
    let (mut arg, mut margin) = (0, f64::INFINITY);
    for (i, &s) in slacks.iter().enumerate() {
        if s < margin {
            arg = i;
            margin = s;
        }
    }
    Ok(MembershipReport {
        verdict: Verdict::from_margin(margin, tol),
        margin,
        certificate: Certificate::Polynomial(arg + 1),
        violations: Vec::new(),
    })
}

/// Membership in `H(c_k^n)`, decided on the spectrum.
pub fn in_h_c(m: &SymMatrix<f64>, k: usize, tol: f64) -> Result<MembershipReport> {
    in_h_e(&eigenvalues_sym(m)?.values, k, tol)
}

/// `diag(x_1..x_{n-1}) + x_n 11^T` with coordinate `pivot` playing `x_n`.
pub fn h_e_nminus1_test_matrix(x: &[f64], pivot: usize) -> Result<SymMatrix<f64>> {
    let n = x.len();
    if n < 2 {
        return Err(domain("need at least two coordinates"));
    }
    if pivot >= n {
        return Err(domain(format!("pivot {pivot} out of range")));
    }
    let rest: Vec<f64> = (0..n).filter(|&i| i != pivot).map(|i| x[i]).collect();
    let t = x[pivot];
    Ok(SymMatrix::from_fn(n - 1, |i, j| {
        if i == j {
            rest[i] + t
        } else {
            t
        }
    }))
}

/// PSD reformulation of `x in H(e_{n-1}^n)` using the last coordinate.
pub fn in_h_e_nminus1_psd_test(x: &[f64]) -> Result<bool> {
    in_h_e_nminus1_psd_test_at(x, x.len().saturating_sub(1), DEFAULT_TOL)
}

/// As [`in_h_e_nminus1_psd_test`] with an explicit distinguished coordinate
/// and a tolerance relative to `max(1, |x|_inf)`.
pub fn in_h_e_nminus1_psd_test_at(x: &[f64], pivot: usize, tol: f64) -> Result<bool> {
    let m = h_e_nminus1_test_matrix(x, pivot)?;
    let scale = x.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    Ok(m.is_psd(tol * scale)?.psd)
}

/// Normalizing functional for bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Norm {
    /// The trace (linear on PSD-like matrices).
    Trace,
    Frobenius,
    /// Schatten `p`-norm, finite `p >= 1`.
    Schatten(f64),
}

impl Norm {
    /// Value on a matrix with eigenvalues `lambda`.
    pub fn of_eigenvalues(&self, lambda: &[f64]) -> f64 {
        match *self {
            Norm::Trace => lambda.iter().sum(),
            Norm::Frobenius => lambda.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Norm::Schatten(p) => lambda
                .iter()
                .map(|v| v.abs().powf(p))
                .sum::<f64>()
                .powf(1.0 / p),
        }
    }

    fn exponent(&self) -> Option<f64> {
        match *self {
            Norm::Trace => None,
            Norm::Frobenius => Some(2.0),
            Norm::Schatten(p) => Some(p),
        }
    }
}

/// Value of `norm` on the symmetric matrix `m`.
pub fn norm_value(m: &SymMatrix<f64>, norm: Norm) -> Result<f64> {
    match norm {
        Norm::Trace => Ok(m.trace()),
        Norm::Frobenius => Ok(m.frobenius_norm()),
        Norm::Schatten(_) => Ok(norm.of_eigenvalues(&eigenvalues_sym(m)?.values)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundSpec {
    pub norm: Norm,
    pub n: usize,
    pub k: usize,
}

impl BoundSpec {
    pub fn new(norm: Norm, n: usize, k: usize) -> Result<Self> {
        if k < 2 || k > n {
            return Err(domain(format!("bounds need 2 <= k <= n (got n={n}, k={k})")));
        }
        if let Norm::Schatten(p) = norm {
            if !(p >= 1.0 && p.is_finite()) {
                return Err(domain(format!("Schatten exponent must be finite and >= 1 (got {p})")));
            }
        }
        Ok(BoundSpec { norm, n, k })
    }

    /// `F(G(n,k))` in closed form.
    pub fn gram_norm(&self) -> f64 {
        let (n, k) = (self.n as f64, self.k as f64);
        match self.norm.exponent() {
            None => n,
            Some(p) => ((n - 1.0) * (k / (k - 1.0)).powf(p) + ((n - k) / (k - 1.0)).powf(p))
                .powf(1.0 / p),
        }
    }
}

/// Tight lower bound on `lambda_1(M)` over `M in S^{n,k}` with `F(M) = 1`:
/// `lambda_1(G(n,k)) / F(G(n,k))`.
pub fn min_eig_bound(spec: &BoundSpec) -> f64 {
    if spec.k == spec.n {
        return 0.0;
    }
    let (n, k) = (spec.n as f64, spec.k as f64);
    ((k - n) / (k - 1.0)) / spec.gram_norm()
}

/// The same bound as `-1 / f(-1, k/(n-k), .., k/(n-k))`, where `f` is the
/// norm as a function of the eigenvalues.
pub fn min_eig_bound_profile(spec: &BoundSpec) -> f64 {
    if spec.k == spec.n {
        return 0.0;
    }
    let (n, k) = (spec.n, spec.k as f64);
    let ratio = k / (n as f64 - k);
    let mut profile = alloc::vec![ratio; n];
    profile[0] = -1.0;
    -1.0 / spec.norm.of_eigenvalues(&profile)
}

/// Frobenius distance from `m` to the PSD cone.
pub fn frobenius_dist_to_psd(m: &SymMatrix<f64>) -> Result<f64> {
    let values = eigenvalues_sym(m)?.values;
    Ok(values
        .iter()
        .map(|v| v.min(0.0))
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt())
}

/// `(n-k)^{3/2} / sqrt((n-k)^2 + (n-1)k^2)`: upper bound on the Frobenius
/// distance to the PSD cone over Frobenius-normalized members of `S^{n,k}`.
pub fn frobenius_dist_bound(n: usize, k: usize) -> Result<f64> {
    if k < 2 || k > n {
        return Err(domain(format!("bounds need 2 <= k <= n (got n={n}, k={k})")));
    }
    let (n, k) = (n as f64, k as f64);
    Ok((n - k).powf(1.5) / ((n - k).powi(2) + (n - 1.0) * k * k).sqrt())
}
