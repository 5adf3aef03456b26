//! Locally singular matrices and their classification up to diagonal
//! congruence.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::cones::{in_s_nk, DEFAULT_TOL};
use crate::error::domain;
use crate::realize::{dgd_family, draw_rng, random_scaling};
use crate::scalar::{Rational, Scalar};
use crate::spectra::eigenvalues_sym;
use crate::symmat::{gram_g, IndexSet, SymMatrix};
use crate::{Error, Result};

/// In `S^{n,k}` with every `k x k` principal minor numerically zero.
pub fn is_locally_singular(m: &SymMatrix<f64>, k: usize, tol: f64) -> Result<bool> {
    if !in_s_nk(m, k, tol)?.verdict.is_member() {
        return Ok(false);
    }
    for s in IndexSet::subsets(m.n(), k) {
        if m.principal_minor(&s)?.abs() > m.minor_tolerance(&s, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nonsingular and locally singular.
pub fn is_nls(m: &SymMatrix<f64>, k: usize, tol: f64) -> Result<bool> {
    if !is_locally_singular(m, k, tol)? {
        return Ok(false);
    }
    let full = IndexSet::full(m.n());
    Ok(m.determinant().abs() > m.minor_tolerance(&full, tol))
}

/// Exact variant: minors are tested for equality with zero, PSD-ness of
/// the blocks in floating point.
pub fn is_nls_exact(m: &SymMatrix<Rational>, k: usize) -> Result<bool> {
    if !in_s_nk(&m.to_f64(), k, DEFAULT_TOL)?.verdict.is_member() {
        return Ok(false);
    }
    for s in IndexSet::subsets(m.n(), k) {
        if !m.principal_minor(&s)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(!m.determinant().is_zero())
}

/// Why a matrix is not `D G(n,k) D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Refutation {
    Singular,
    WrongDiagonalSigns,
    OffDiagonalMismatch,
    SignPatternNotRankOne,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CongruenceWitness {
    pub found: bool,
    /// Signed scaling with `D G(n,k) D = M`; first entry positive.
    pub d: Option<Vec<f64>>,
    pub reason: Option<Refutation>,
}

impl CongruenceWitness {
    fn refuted(reason: Refutation) -> Self {
        CongruenceWitness {
            found: false,
            d: None,
            reason: Some(reason),
        }
    }
}

/// Signs `sigma` with `sigma_i sigma_j = -sign(i, j)` for all `i < j`, or
/// `None` when the pattern is not of that rank-one form.
///
/// Union-find with parity; `sigma_0 = +1`.
pub fn rank_one_signs(n: usize, sign: impl Fn(usize, usize) -> i8) -> Option<Vec<i8>> {
    let mut parent: Vec<usize> = (0..n).collect();
    // parity[i]: 1 when sigma_i differs from sigma_{parent[i]}
    let mut parity = vec![0u8; n];

    fn find(parent: &mut [usize], parity: &mut [u8], i: usize) -> (usize, u8) {
        let p = parent[i];
        if p == i {
            return (i, 0);
        }
        let (root, up) = find(parent, parity, p);
        parent[i] = root;
        parity[i] ^= up;
        (root, parity[i])
    }

    for i in 0..n {
        for j in i + 1..n {
            // equal signs need a negative entry
            let want = u8::from(sign(i, j) > 0);
            let (ri, pi) = find(&mut parent, &mut parity, i);
            let (rj, pj) = find(&mut parent, &mut parity, j);
            if ri == rj {
                if pi ^ pj != want {
                    return None;
                }
            } else {
                parent[ri] = rj;
                parity[ri] = pi ^ pj ^ want;
            }
        }
    }
    let signs: Vec<u8> = (0..n).map(|i| find(&mut parent, &mut parity, i).1).collect();
    let flip = signs.first().copied().unwrap_or(0);
    Some(signs.iter().map(|&p| if p ^ flip == 0 { 1 } else { -1 }).collect())
}

/// Decide whether `m = D G(n,k) D` for some nonsingular diagonal `D`.
pub fn diag_congruent_to_g(m: &SymMatrix<f64>, k: usize, tol: f64) -> Result<CongruenceWitness> {
    let n = m.n();
    if k < 2 || k > n {
        return Err(domain(format!("need 2 <= k <= n (got n={n}, k={k})")));
    }
    let full = IndexSet::full(n);
    if m.determinant().abs() <= m.minor_tolerance(&full, tol) {
        return Ok(CongruenceWitness::refuted(Refutation::Singular));
    }
    let scale = m.max_abs();
    if (0..n).any(|i| *m.get(i, i) <= tol * scale) {
        return Ok(CongruenceWitness::refuted(Refutation::WrongDiagonalSigns));
    }
    let root: Vec<f64> = m.diagonal().iter().map(|v| v.sqrt()).collect();
    let inv: Vec<f64> = root.iter().map(|v| 1.0 / v).collect();
    let normalized = m.diagonal_congruence(&inv)?;
    let off = 1.0 / (k as f64 - 1.0);
    for i in 0..n {
        for j in i + 1..n {
            if (normalized.get(i, j).abs() - off).abs() > tol.max(1e-12) * (1.0 + off) {
                return Ok(CongruenceWitness::refuted(Refutation::OffDiagonalMismatch));
            }
        }
    }
    let Some(sigma) = rank_one_signs(n, |i, j| if *normalized.get(i, j) > 0.0 { 1 } else { -1 }) else {
        return Ok(CongruenceWitness::refuted(Refutation::SignPatternNotRankOne));
    };
    let d: Vec<f64> = root.iter().zip(&sigma).map(|(r, &s)| r * f64::from(s)).collect();
    Ok(CongruenceWitness {
        found: true,
        d: Some(d),
        reason: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SignVerdict {
    Singular,
    CongruentToG,
}

/// One unit-diagonal `4 x 4` matrix with `+-1` off-diagonal entries.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SignCase {
    pub id: u8,
    /// Upper-triangle signs in the order (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
    pub signs: [i8; 6],
    pub verdict: SignVerdict,
    pub negative_eigenvalues: usize,
}

const UPPER_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Sign pattern `id` (bit `b` set means pair `b` is `-1`) as an exact matrix.
pub fn sign_case_matrix(id: u8) -> SymMatrix<Rational> {
    let signs = sign_case_signs(id);
    SymMatrix::from_fn(4, |i, j| {
        if i == j {
            Rational::from_i64(1)
        } else {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            let p = UPPER_PAIRS.iter().position(|&q| q == (a, b)).expect("pair");
            Rational::from_i64(i64::from(signs[p]))
        }
    })
}

fn sign_case_signs(id: u8) -> [i8; 6] {
    let mut s = [1i8; 6];
    for (b, v) in s.iter_mut().enumerate() {
        if id >> b & 1 == 1 {
            *v = -1;
        }
    }
    s
}

/// Classify one sign case exactly.
pub fn classify_sign_case(id: u8) -> Result<SignCase> {
    if id >= 64 {
        return Err(domain(format!("sign case id {id} out of range")));
    }
    let m = sign_case_matrix(id);
    let signs = sign_case_signs(id);
    let singular = m.determinant().is_zero();
    let rank_one = rank_one_signs(4, |i, j| {
        let p = UPPER_PAIRS.iter().position(|&q| q == (i, j)).expect("pair");
        signs[p]
    })
    .is_some();
    let verdict = match (singular, rank_one) {
        (true, false) => SignVerdict::Singular,
        (false, true) => SignVerdict::CongruentToG,
        (true, true) => {
            return Err(Error::Falsified(format!(
                "sign case {id} is singular yet has the sign pattern of D G(4,2) D"
            )))
        }
        (false, false) => {
            return Err(Error::Falsified(format!(
                "sign case {id} is neither singular nor congruent to G(4,2)"
            )))
        }
    };
    let negative_eigenvalues = eigenvalues_sym(&m.to_f64())?.inertia(1e-9).0;
    Ok(SignCase {
        id,
        signs,
        verdict,
        negative_eigenvalues,
    })
}

/// All 64 locally singular unit-diagonal sign patterns in `S^{4,2}`.
pub fn enumerate_sign_cases_42() -> Result<Vec<SignCase>> {
    (0..64).map(classify_sign_case).collect()
}

/// `G(n,2)^{-1} = (n-3)/(2(n-2)) G(n,n-2)`, checked exactly.
pub fn gram_inverse_identity_holds(n: usize) -> Result<bool> {
    if n < 4 {
        return Err(domain("identity needs n >= 4"));
    }
    let inv = gram_g::<Rational>(n, 2)?.inverse(0.0)?;
    let factor = Rational::from_ratio(n as i64 - 3, 2 * (n as i64 - 2));
    Ok(inv == gram_g::<Rational>(n, n - 2)?.scaled(&factor))
}

/// Checks run on one structure-theorem instance.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StructureSample {
    pub index: u64,
    /// Scaling used to build the instance.
    pub d_true: Vec<f64>,
    pub witness: CongruenceWitness,
    pub is_nls: bool,
    /// `max |D G D - M| / max |M|` for the recovered `D`.
    pub round_trip_error: f64,
    pub recovered_up_to_sign: bool,
    pub negative_eigenvalues: usize,
    /// Sign conditions for `k = n-2`: `det < 0`, `(n-1)`-minors `< 0`,
    /// `(n-3)`-minors `> 0`.
    pub minor_signs: Option<bool>,
    /// Inverse has positive diagonal, zero `2x2` and negative `3x3` minors
    /// (`k = n-2`).
    pub inverse_pattern: Option<bool>,
    /// Every Schur complement is NLS in `S^{n-1,k-1}` (`k >= 3`).
    pub schur_complements_nls: Option<bool>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StructureReport {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub samples: Vec<StructureSample>,
    pub all_passed: bool,
}

impl StructureReport {
    /// `Err(Falsified)` naming the first failing sample, if any.
    pub fn ensure(&self) -> Result<()> {
        match self.samples.iter().find(|s| !s.passed) {
            None => Ok(()),
            Some(s) => Err(Error::Falsified(format!(
                "structure check failed for (n,k)=({},{}) sample {}",
                self.n, self.k, s.index
            ))),
        }
    }
}

pub fn check_structure_params(n: usize, k: usize) -> Result<()> {
    if (n, k) == (4, 2) || (n > k + 1 && k > 2) {
        Ok(())
    } else {
        Err(domain(format!(
            "structure verification needs n-1 > k > 2 or (n,k) = (4,2) (got n={n}, k={k})"
        )))
    }
}

/// Build and check instance `index` of the structure-theorem harness.
///
/// Instances are `E (D G D) E` for random diagonal `D` and `E`; only diagonal
/// congruences are applied because they keep the matrix locally singular.
pub fn verify_structure_sample(n: usize, k: usize, seed: u64, index: u64) -> Result<StructureSample> {
    check_structure_params(n, k)?;
    let tol = DEFAULT_TOL;
    let mut rng = draw_rng(seed, index);
    let d = random_scaling(n, &mut rng);
    let e = random_scaling(n, &mut rng);
    let base = dgd_family(n, k, &d)?;
    let m = base.diagonal_congruence(&e)?;
    let d_true: Vec<f64> = d.iter().zip(&e).map(|(a, b)| a * b).collect();

    let nls = is_nls(&m, k, tol)?;
    let witness = diag_congruent_to_g(&m, k, tol)?;
    let scale = m.max_abs();
    let (round_trip_error, recovered_up_to_sign) = match &witness.d {
        Some(w) => {
            let rebuilt = dgd_family(n, k, w)?;
            let err = rebuilt.add(&m.scaled(&-1.0))?.max_abs() / scale;
            let s = if w[0] * d_true[0] > 0.0 { 1.0 } else { -1.0 };
            let same = w
                .iter()
                .zip(&d_true)
                .all(|(a, b)| (a - s * b).abs() <= 1e-9 * b.abs().max(1.0));
            (err, same)
        }
        None => (f64::INFINITY, false),
    };
    let negative_eigenvalues = eigenvalues_sym(&m)?.inertia(1e-9 * scale).0;

    let (minor_signs, inverse_pattern) = if k + 2 == n {
        (Some(minor_signs_hold(&m, tol)?), Some(inverse_pattern_holds(&m, tol)?))
    } else {
        (None, None)
    };
    let schur_complements_nls = if k >= 3 {
        let mut all = true;
        for i in 0..n {
            let c = m.schur_complement(i, 0.0)?;
            all &= in_s_nk(&c, k - 1, tol)?.verdict.is_member() && is_nls(&c, k - 1, tol)?;
        }
        // both directions of the equivalence
        Some(all && all == nls)
    } else {
        None
    };

    let passed = nls
        && witness.found
        && round_trip_error <= 1e-9
        && recovered_up_to_sign
        && negative_eigenvalues == 1
        && minor_signs != Some(false)
        && inverse_pattern != Some(false)
        && schur_complements_nls != Some(false);
    Ok(StructureSample {
        index,
        d_true,
        witness,
        is_nls: nls,
        round_trip_error,
        recovered_up_to_sign,
        negative_eigenvalues,
        minor_signs,
        inverse_pattern,
        schur_complements_nls,
        passed,
    })
}

fn minors_strictly(m: &SymMatrix<f64>, size: usize, tol: f64, positive: bool) -> Result<bool> {
    for s in IndexSet::subsets(m.n(), size) {
        let v = m.principal_minor(&s)?;
        let t = m.minor_tolerance(&s, tol);
        if (positive && v <= t) || (!positive && v >= -t) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn minor_signs_hold(m: &SymMatrix<f64>, tol: f64) -> Result<bool> {
    let n = m.n();
    Ok(minors_strictly(m, n, tol, false)?
        && minors_strictly(m, n - 1, tol, false)?
        && minors_strictly(m, n - 3, tol, true)?)
}

fn inverse_pattern_holds(m: &SymMatrix<f64>, tol: f64) -> Result<bool> {
    let inv = m.inverse(0.0)?;
    let n = inv.n();
    if (0..n).any(|i| *inv.get(i, i) <= 0.0) {
        return Ok(false);
    }
    for s in IndexSet::subsets(n, 2) {
        if inv.principal_minor(&s)?.abs() > inv.minor_tolerance(&s, tol.max(1e-8)) {
            return Ok(false);
        }
    }
    minors_strictly(&inv, 3, tol, false)
}

/// Run the harness on `samples` instances.
pub fn verify_structure_theorem(n: usize, k: usize, samples: usize, seed: u64) -> Result<StructureReport> {
    check_structure_params(n, k)?;
    let samples: Vec<StructureSample> = (0..samples as u64)
        .map(|i| verify_structure_sample(n, k, seed, i))
        .collect::<Result<_>>()?;
    Ok(assemble_structure_report(n, k, seed, samples))
}

/// Report from per-sample results in index order.
pub fn assemble_structure_report(
    n: usize,
    k: usize,
    seed: u64,
    samples: Vec<StructureSample>,
) -> StructureReport {
    let all_passed = samples.iter().all(|s| s.passed);
    StructureReport {
        n,
        k,
        seed,
        samples,
        all_passed,
    }
}
