//! Monic quartics: good roots, almost-nonnegative roots and the
//! reconstruction of `D G(4,2) D` from a characteristic polynomial.
//!
//! `p = a0 + a1 x + a2 x^2 + a3 x^3 + x^4` throughout. The root oracle in
//! [`crate::poly`] decides; the coefficient inequalities are diagnostics.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::cones::Verdict;
use crate::error::domain;
use crate::linalg;
use crate::poly::{self, is_real_root, monic_roots, root_scale};
use crate::realize::dgd_family;
use crate::spectra::{char_poly_coeffs_by_minors, elementary_symmetric_all, power_sums_from_coeffs, CoeffVector};
use crate::symmat::SymMatrix;
use crate::{Error, Result};

/// Largest accepted relative coefficient mismatch of a reconstruction.
pub const RECONSTRUCTION_TOL: f64 = 1e-6;

const K_GRID_POINTS: usize = 1001;
const MAX_POLISH_STARTS: usize = 8;
const GOLDEN_STEPS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(from = "[f64; 4]", into = "[f64; 4]"))]
pub struct QuarticPoly {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl From<[f64; 4]> for QuarticPoly {
    fn from(c: [f64; 4]) -> Self {
        QuarticPoly::new(c[0], c[1], c[2], c[3])
    }
}

impl From<QuarticPoly> for [f64; 4] {
    fn from(p: QuarticPoly) -> Self {
        p.coeffs()
    }
}

impl QuarticPoly {
    pub const fn new(a0: f64, a1: f64, a2: f64, a3: f64) -> Self {
        QuarticPoly { a0, a1, a2, a3 }
    }

    /// `[a0, a1, a2, a3]`.
    pub fn coeffs(&self) -> [f64; 4] {
        [self.a0, self.a1, self.a2, self.a3]
    }

    pub fn eval(&self, x: f64) -> f64 {
        poly::eval_monic_real(&self.coeffs(), x)
    }

    /// `det(x I - M)` for a `4 x 4` matrix.
    pub fn char_poly(m: &SymMatrix<f64>) -> Result<Self> {
        if m.n() != 4 {
            return Err(domain("characteristic quartic needs a 4x4 matrix"));
        }
        Ok(Self::from_char_coeffs(&char_poly_coeffs_by_minors(m)))
    }

    /// From `c_0..c_4` with `det(x I - M) = x^4 - c1 x^3 + c2 x^2 - c3 x + c4`.
    pub fn from_char_coeffs(c: &CoeffVector<f64>) -> Self {
        let c = c.as_slice();
        QuarticPoly::new(c[4], -c[3], c[2], -c[1])
    }

    /// `(1, e1, e2, e3, e4)` of the roots.
    pub fn char_coeffs(&self) -> CoeffVector<f64> {
        CoeffVector::new(vec![1.0, -self.a3, self.a2, -self.a1, self.a0]).expect("leading one")
    }

    /// Root magnitude scale `max(|a3|, |a2|^(1/2), |a1|^(1/3), |a0|^(1/4))`.
    pub fn scale(&self) -> f64 {
        self.a3
            .abs()
            .max(self.a2.abs().sqrt())
            .max(self.a1.abs().cbrt())
            .max(self.a0.abs().sqrt().sqrt())
    }

    /// `max_i |a_i - b_i| / S^(4-i)` with `S = max(1e-300, scale)`.
    pub fn relative_distance(&self, other: &QuarticPoly) -> f64 {
        let s = self.scale().max(1e-300);
        let (x, y) = (self.coeffs(), other.coeffs());
        (0..4)
            .map(|i| (x[i] - y[i]).abs() / s.powi(4 - i as i32))
            .fold(0.0, f64::max)
    }

    /// `y^4 - y^3 + 0 y^2 + b1 y + b0` with `x = |a3| y`, for `a3 < 0`.
    pub fn normalized(&self) -> Result<QuarticPoly> {
        if self.a3 >= 0.0 {
            if self.a3 == 0.0 && self.a2 == 0.0 && self.a0 < 0.0 {
                return Err(domain(
                    "a3 = a2 = 0 with a0 < 0 has no real-rooted instance (sum of squared roots vanishes)",
                ));
            }
            return Err(domain("normalization needs a3 < 0"));
        }
        let s = -self.a3;
        Ok(QuarticPoly::new(
            self.a0 / s.powi(4),
            self.a1 / s.powi(3),
            self.a2 / s.powi(2),
            -1.0,
        ))
    }
}

/// Expand `prod (x - r_i)`.
pub fn quartic_from_roots(r: [f64; 4]) -> QuarticPoly {
    let e = elementary_symmetric_all(&r);
    QuarticPoly::new(*e.get(4), -e.get(3), *e.get(2), -e.get(1))
}

/// Four complex roots, ascending by real part.
pub fn quartic_roots(p: &QuarticPoly) -> Result<[Complex64; 4]> {
    let r = monic_roots(&p.coeffs())?;
    Ok([r[0], r[1], r[2], r[3]])
}

/// Real roots ascending, when the oracle calls every root real.
pub fn quartic_real_roots(p: &QuarticPoly) -> Result<Option<[f64; 4]>> {
    Ok(poly::real_roots(&p.coeffs())?.map(|r| [r[0], r[1], r[2], r[3]]))
}

/// Both decision routes for good roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GoodRootsRoutes {
    /// Real, no zero root, one negative root, roots on the boundary of `H(e_2^4)`.
    pub by_roots: bool,
    /// Real-rooted with `a0 < 0`, `a2 = 0`, `a3 <= 0`.
    pub by_coefficients: bool,
}

pub fn good_roots_routes(p: &QuarticPoly, tol: f64) -> Result<GoodRootsRoutes> {
    let Some(r) = quartic_real_roots(p)? else {
        return Ok(GoodRootsRoutes {
            by_roots: false,
            by_coefficients: false,
        });
    };
    let s = p.scale().max(f64::MIN_POSITIVE);
    let by_coefficients = p.a0 < -tol * s.powi(4) && p.a2.abs() <= tol * s * s && p.a3 <= tol * s;

    let rs = 1.0 + r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let no_zero = r.iter().all(|v| v.abs() > tol * rs);
    let negatives = r.iter().filter(|&&v| v < 0.0).count();
    // e1, e2 from the complex roots: clustered roots are perturbed along
    // directions that cancel in symmetric functions but not in real parts.
    let z = quartic_roots(p)?;
    let e1: f64 = z.iter().map(|v| v.re).sum();
    let mut e2 = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for j in i + 1..4 {
            e2 += z[i] * z[j];
        }
    }
    let norm = r.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let margin = (e1 / norm).min(e2.re / (norm * norm));
    let boundary = Verdict::from_margin(margin, tol.max(1e-12)) == Verdict::Boundary;
    Ok(GoodRootsRoutes {
        by_roots: no_zero && negatives == 1 && boundary,
        by_coefficients,
    })
}

/// Good roots, decided by the root oracle.
pub fn has_good_roots(p: &QuarticPoly, tol: f64) -> Result<bool> {
    Ok(good_roots_routes(p, tol)?.by_roots)
}

/// General discriminant of `x^4 + b x^3 + c x^2 + d x + e`.
pub fn general_discriminant(p: &QuarticPoly) -> f64 {
    let (b, c, d, e) = (p.a3, p.a2, p.a1, p.a0);
    256.0 * e.powi(3) - 192.0 * b * d * e * e - 128.0 * c * c * e * e + 144.0 * c * d * d * e
        - 27.0 * d.powi(4)
        + 144.0 * b * b * c * e * e
        - 6.0 * b * b * d * d * e
        - 80.0 * b * c * c * d * e
        + 18.0 * b * c * d.powi(3)
        + 16.0 * c.powi(4) * e
        - 4.0 * c.powi(3) * d * d
        - 27.0 * b.powi(4) * e * e
        + 18.0 * b.powi(3) * c * d * e
        - 4.0 * b.powi(3) * d.powi(3)
        - 4.0 * b * b * c.powi(3) * e
        + b * b * c * c * d * d
}

/// Closed-form discriminant in `(a0, a1)` for the `a2 = 0`, `a3 = -1` form.
///
/// Equals [`general_discriminant`] of `a0 - a1 x - x^3 + x^4`, with the sign
/// of `a1` flipped relative to `a0 + a1 x - x^3 + x^4`.
pub fn short_discriminant(a0: f64, a1: f64) -> f64 {
    -4.0 * a1.powi(3) - 27.0 * a1.powi(4) - 6.0 * a1 * a1 * a0 - 27.0 * a0 * a0
        - 192.0 * a1 * a0 * a0
        + 256.0 * a0.powi(3)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiscriminantCheck {
    pub general: f64,
    /// Normalized form `y^4 - y^3 + a1 y + a0`, when `a2 = 0` and `a3 < 0`.
    pub normalized: Option<QuarticPoly>,
    pub normalized_general: Option<f64>,
    /// [`short_discriminant`] on the normalized coefficients.
    pub short: Option<f64>,
}

pub fn discriminant_check(p: &QuarticPoly, tol: f64) -> DiscriminantCheck {
    let general = general_discriminant(p);
    let s = p.scale().max(f64::MIN_POSITIVE);
    let normalized = if p.a2.abs() <= tol * s * s {
        p.normalized().ok().map(|q| QuarticPoly { a2: 0.0, ..q })
    } else {
        None
    };
    DiscriminantCheck {
        general,
        normalized,
        normalized_general: normalized.as_ref().map(general_discriminant),
        short: normalized.map(|q| short_discriminant(q.a0, q.a1)),
    }
}

/// Power sums `m_0..m_upto` of the roots of `p`.
pub fn power_sums(p: &QuarticPoly, upto: usize) -> Result<Vec<f64>> {
    power_sums_from_coeffs(&p.char_coeffs(), upto)
}

/// `M_ij = m_{i+j}` for `i, j = 1..4` (entries `m_2..m_8`).
pub fn hermite_matrix(p: &QuarticPoly) -> Result<SymMatrix<f64>> {
    let m = power_sums(p, 8)?;
    Ok(SymMatrix::from_fn(4, |i, j| m[i + j + 2]))
}

/// Classical Hankel form `M_ij = m_{i+j-2}` (entries `m_0..m_6`).
pub fn hankel_matrix(p: &QuarticPoly) -> Result<SymMatrix<f64>> {
    let m = power_sums(p, 6)?;
    Ok(SymMatrix::from_fn(4, |i, j| m[i + j]))
}

/// Outcome of a Hermite-matrix PSD test, banded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HermiteVerdict {
    Psd,
    NotPsd,
    /// `|lambda_min| <= band * |M|`.
    Indeterminate,
}

pub fn hermite_verdict(p: &QuarticPoly, band: f64) -> Result<HermiteVerdict> {
    let m = hermite_matrix(p)?;
    let lam = crate::spectra::eigenvalues_sym(&m)?.min();
    let norm = m.frobenius_norm();
    Ok(if lam.abs() <= band * norm {
        HermiteVerdict::Indeterminate
    } else if lam > 0.0 {
        HermiteVerdict::Psd
    } else {
        HermiteVerdict::NotPsd
    })
}

/// Four sign polynomials in `(a0, a1, k)` for `a0 + a1 x - x^3 + x^4`: the
/// characteristic coefficients of the Hankel matrix of `q`.
pub fn hankel_sign_polynomials(a0: f64, a1: f64, k: f64) -> [f64; 4] {
    let p1 = -27.0 * a1.powi(4) / 256.0 - 9.0 * a1.powi(3) * k / 32.0 + a1.powi(3) / 16.0
        - 9.0 / 16.0 * a1 * a1 * a0 * k
        + 3.0 * a1 * a1 * a0 / 128.0
        - a1 * a1 * k.powi(3) / 4.0
        + a1 * a1 * k * k / 16.0
        + 3.0 * a1 * a0 * a0 / 16.0
        - 5.0 / 4.0 * a1 * a0 * k * k
        + 9.0 * a1 * a0 * k / 32.0
        - a0.powi(3) / 16.0
        - a0 * a0 * k * k / 2.0
        + 9.0 * a0 * a0 * k / 16.0
        - 27.0 * a0 * a0 / 256.0
        - a0 * k.powi(4)
        + a0 * k.powi(3) / 4.0;
    let p2 = 27.0 * a1.powi(4) / 256.0 + 9.0 * a1.powi(3) * k / 32.0 + a1.powi(3) / 8.0
        + 45.0 / 128.0 * a1 * a1 * a0 * k
        - 9.0 * a1 * a1 * a0 / 128.0
        + a1 * a1 * k.powi(3) / 4.0
        + 45.0 * a1 * a1 * k * k / 16.0
        + a1 * a1 * k
        + 37.0 * a1 * a1 / 8.0
        - 9.0 * a1 * a0 * a0 / 128.0
        + 11.0 / 16.0 * a1 * a0 * k * k
        - 43.0 * a1 * a0 * k / 32.0
        - 53.0 * a1 * a0 / 32.0
        + 9.0 * a1 * k.powi(3)
        + 27.0 * a1 * k / 2.0
        - 3.0 * a1
        + a0.powi(3) / 64.0
        + 3.0 * a0 * a0 * k * k / 16.0
        + 23.0 * a0 * a0 * k / 128.0
        + 77.0 * a0 * a0 / 256.0
        + a0 * k.powi(4) / 2.0
        + 27.0 * a0 * k.powi(3) / 8.0
        - 3.0 * a0 * k * k
        + 3.0 * a0 * k / 8.0
        - 3.0 * a0 / 8.0
        + 8.0 * k.powi(5)
        - 2.0 * k.powi(4)
        + 16.0 * k.powi(3)
        - 4.0 * k * k;
    let p3 = -3.0 * a1.powi(3) / 16.0 + 3.0 * a1 * a1 * a0 / 64.0 - 19.0 * a1 * a1 * k * k / 16.0
        - a1 * a1 * k
        - 17.0 * a1 * a1 / 16.0
        + 11.0 * a1 * a0 * k / 32.0
        + 17.0 * a1 * a0 / 32.0
        - 9.0 * a1 * k.powi(3) / 2.0
        - a1 * k * k
        + 3.0 * a1 * k
        - 15.0 * a1 / 2.0
        - 3.0 * a0 * a0 * k / 32.0
        - 17.0 * a0 * a0 / 256.0
        - 5.0 * a0 * k.powi(3) / 4.0
        + 9.0 * a0 * k * k / 8.0
        - 11.0 * a0 * k / 8.0
        + 21.0 * a0 / 8.0
        - 4.0 * k.powi(5)
        + k.powi(4)
        - 16.0 * k.powi(3)
        + 33.0 * k * k
        - 38.0 * k
        + 9.0;
    let p4 = -3.0 * a1 * a1 / 16.0 - 3.0 * a1 * k + 5.0 * a1 / 2.0 + 3.0 * a0 * k / 8.0 - 5.0 * a0 / 8.0
        + 2.0 * k.powi(3)
        - 11.0 * k * k
        + 12.0 * k
        - 7.0;
    [p1, p2, p3, p4]
}

/// Sign conditions: first `>= 0`, second `<= 0`, third `>= 0`,
/// fourth `<= 0`.
pub fn hankel_sign_conditions_hold(a0: f64, a1: f64, k: f64) -> bool {
    let [p1, p2, p3, p4] = hankel_sign_polynomials(a0, a1, k);
    p1 >= 0.0 && p2 <= 0.0 && p3 >= 0.0 && p4 <= 0.0
}

/// Certificate that `p` is the characteristic polynomial of `D G(4,2) D`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AlmostNonnegCertificate {
    /// Free quadratic coefficient of `q`.
    pub k: f64,
    /// Roots of `q`, ascending; equal to `d^2`.
    pub roots_q: [f64; 4],
    pub d: [f64; 4],
    /// [`QuarticPoly::relative_distance`] between `p` and the reconstruction.
    pub residual: f64,
}

/// `q_k = b0 + b1 x + k x^2 + b3 x^3 + x^4` with `b0 = -a0/16`, `b1 = -a1/4`,
/// `b3 = a3`.
pub fn associated_q(p: &QuarticPoly, k: f64) -> QuarticPoly {
    QuarticPoly::new(-p.a0 / 16.0, -p.a1 / 4.0, k, p.a3)
}

/// Coefficients (lowest first) of `disc(q_k)` as a quartic in `k`.
pub fn k_discriminant_coeffs(p: &QuarticPoly) -> [f64; 5] {
    let (b, d, e) = (p.a3, -p.a1 / 4.0, -p.a0 / 16.0);
    [
        256.0 * e.powi(3) - 192.0 * b * d * e * e - 27.0 * d.powi(4) - 6.0 * b * b * d * d * e
            - 27.0 * b.powi(4) * e * e
            - 4.0 * b.powi(3) * d.powi(3),
        144.0 * d * d * e + 144.0 * b * b * e * e + 18.0 * b * d.powi(3) + 18.0 * b.powi(3) * d * e,
        -128.0 * e * e - 80.0 * b * d * e + b * b * d * d,
        -4.0 * d * d - 4.0 * b * b * e,
        16.0 * e,
    ]
}

/// Infeasibility of `q_k`: zero iff its roots are real and nonnegative.
fn infeasibility(p: &QuarticPoly, k: f64) -> Result<(f64, [f64; 4])> {
    let q = associated_q(p, k);
    let c = q.coeffs();
    let roots = monic_roots(&c)?;
    let s = root_scale(&roots);
    let mut worst = 0.0f64;
    for z in &roots {
        if !is_real_root(&c, *z, s) {
            worst = worst.max(z.im.abs());
        }
        worst = worst.max(-z.re - 1e-9 * s);
    }
    // conjugate pairs split to re +- im so the polish starts off the symmetric locus
    let re: [f64; 4] = core::array::from_fn(|i| roots[i].re + roots[i].im);
    Ok((worst.max(0.0) / s, re))
}

/// Search `k` in `[0, 3/8 a3^2]` for which `q_k` has positive real roots,
/// then certify by rebuilding `D G(4,2) D` and comparing coefficients.
pub fn find_almost_nonneg_k(p: &QuarticPoly) -> Result<Option<AlmostNonnegCertificate>> {
    let s = p.scale();
    if !(s > 0.0) || !s.is_finite() {
        return Ok(None);
    }
    let sign_tol = 1e-12;
    // q needs alternating signs and a positive constant term.
    if p.a3 >= -sign_tol * s || p.a1 < -sign_tol * s.powi(3) || p.a0 >= -sign_tol * s.powi(4) {
        return Ok(None);
    }
    let k_hi = 0.375 * p.a3 * p.a3;

    let mut critical: Vec<f64> = vec![0.0, k_hi];
    let dc = k_discriminant_coeffs(p);
    let lead = dc[4];
    if lead != 0.0 {
        let monic: Vec<f64> = dc[..4].iter().map(|c| c / lead).collect();
        let roots = monic_roots(&monic)?;
        let rs = root_scale(&roots);
        for z in roots {
            // clustered roots of the discriminant come back as tight complex pairs
            let near_real = z.im.abs() <= 1e-3 * rs;
            if (near_real || is_real_root(&monic, z, rs)) && z.re > 0.0 && z.re < k_hi {
                critical.push(z.re);
            }
        }
    }
    critical.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));

    let mut candidates: Vec<(f64, f64, [f64; 4])> = Vec::new();
    // Interior of the widest feasible cell between critical points first.
    let mut cell: Option<(f64, f64)> = None;
    for w in critical.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo <= 0.0 {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let (bad, re) = infeasibility(p, mid)?;
        if bad == 0.0 && cell.is_none_or(|(l, h)| hi - lo > h - l) {
            cell = Some((lo, hi));
            candidates.insert(0, (-1.0, mid, re));
        }
    }
    for &k in &critical {
        let (bad, re) = infeasibility(p, k)?;
        candidates.push((bad, k, re));
    }
    if cell.is_none() {
        // feasible windows can be narrower than the discriminant roots resolve
        for w in critical.windows(2) {
            let k = golden_min(w[0], w[1], |k| infeasibility(p, k).map(|r| r.0))?;
            let (bad, re) = infeasibility(p, k)?;
            candidates.push((bad, k, re));
        }
        for i in 0..K_GRID_POINTS {
            let k = k_hi * i as f64 / (K_GRID_POINTS - 1) as f64;
            let (bad, re) = infeasibility(p, k)?;
            candidates.push((bad, k, re));
        }
    }
    candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));

    let mut found: Option<(Vec<f64>, f64)> = None;
    for (_, _, re) in candidates.iter().take(MAX_POLISH_STARTS) {
        // equal entries stay equal under the symmetric update, so break ties
        let start: Vec<f64> = re
            .iter()
            .enumerate()
            .map(|(i, v)| v.abs() * (1.0 + 1e-3 * (i as f64 - 1.5)))
            .collect();
        let w = polish_scaling(p, &start);
        if w.iter().any(|v| !(*v > 0.0)) {
            continue;
        }
        let d: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
        let rebuilt = QuarticPoly::char_poly(&dgd_family(4, 2, &d)?)?;
        let residual = p.relative_distance(&rebuilt);
        if residual <= RECONSTRUCTION_TOL {
            found = Some((w, residual));
            break;
        }
    }
    let Some((w, residual)) = found else {
        return Ok(None);
    };
    let mut roots_q = [w[0], w[1], w[2], w[3]];
    roots_q.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let d = roots_q.map(|v| v.sqrt());
    Ok(Some(AlmostNonnegCertificate {
        k: *elementary_symmetric_all(&roots_q).get(2),
        roots_q,
        d,
        residual,
    }))
}

fn golden_min(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    for _ in 0..GOLDEN_STEPS {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = f(a)?;
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = f(b)?;
        }
    }
    Ok(if fa <= fb { a } else { b })
}

/// Damped Gauss-Newton in `u` (`w = u^2`) on `e1(w) = -a3`, `e3(w) = a1/4`,
/// `e4(w) = -a0/16`; returns the best `w` seen.
fn polish_scaling(p: &QuarticPoly, w0: &[f64]) -> Vec<f64> {
    let s = p.scale();
    let target = [-p.a3 / s, p.a1 / 4.0 / s.powi(3), -p.a0 / 16.0 / s.powi(4)];
    let residual = |u: &[f64]| -> [f64; 3] {
        let w: Vec<f64> = u.iter().map(|v| v * v).collect();
        let e = elementary_symmetric_all(&w);
        [e.get(1) - target[0], e.get(3) - target[1], e.get(4) - target[2]]
    };
    let cost = |r: &[f64; 3]| r.iter().map(|v| v * v).sum::<f64>();
    let mut u: Vec<f64> = w0.iter().map(|v| (v / s).max(1e-12).sqrt()).collect();
    let mut r = residual(&u);
    let mut mu = 1e-6;
    for _ in 0..200 {
        if cost(&r) < 1e-32 {
            break;
        }
        let w: Vec<f64> = u.iter().map(|v| v * v).collect();
        let mut jac = [[0.0; 4]; 3];
        for i in 0..4 {
            let others: Vec<f64> = (0..4).filter(|&j| j != i).map(|j| w[j]).collect();
            let e = elementary_symmetric_all(&others);
            for (row, l) in [1usize, 3, 4].iter().enumerate() {
                jac[row][i] = e.get(l - 1) * 2.0 * u[i];
            }
        }
        let mut jtj = vec![0.0; 16];
        let mut jtr = vec![0.0; 4];
        for a in 0..4 {
            for b in 0..4 {
                jtj[a * 4 + b] = (0..3).map(|l| jac[l][a] * jac[l][b]).sum();
            }
            jtr[a] = -(0..3).map(|l| jac[l][a] * r[l]).sum::<f64>();
        }
        let mut improved = false;
        for _ in 0..40 {
            let mut damped = jtj.clone();
            for a in 0..4 {
                damped[a * 4 + a] += mu * (jtj[a * 4 + a] + 1e-12);
            }
            if let Ok(step) = linalg::solve(damped, jtr.clone(), 4) {
                let trial: Vec<f64> = u.iter().zip(&step).map(|(a, b)| a + b).collect();
                let rt = residual(&trial);
                if cost(&rt) < cost(&r) {
                    u = trial;
                    r = rt;
                    mu = (mu * 0.2).max(1e-15);
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
    u.iter().map(|v| v * v * s).collect()
}

/// `D G(4,2) D` whose characteristic polynomial is `p`.
pub fn realize_quartic_as_dgd(p: &QuarticPoly, tol: f64) -> Result<SymMatrix<f64>> {
    if !has_good_roots(p, tol)? {
        return Err(domain("polynomial does not have good roots"));
    }
    match find_almost_nonneg_k(p)? {
        Some(cert) => dgd_family(4, 2, &cert.d),
        None => Err(Error::Falsified(alloc::format!(
            "good-rooted quartic {:?} has no almost-nonnegative certificate",
            p.coeffs()
        ))),
    }
}
