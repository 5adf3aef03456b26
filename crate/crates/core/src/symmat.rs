//! Symmetric matrix value type and the submatrix algebra built on it.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use itertools::Itertools;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::domain;
use crate::linalg;
use crate::scalar::{Rational, Scalar};
use crate::spectra;
use crate::{Error, Result};

/// Arithmetic mode of a matrix, derived from its scalar type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Mode {
    Float,
    Exact,
}

/// Sorted set of distinct 0-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Builds a set from arbitrary order; duplicates are rejected.
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(domain("index set contains duplicates"));
        }
        Ok(IndexSet(indices))
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        IndexSet((0..n).collect())
    }

    /// Indices of `0..n` not in `self`.
    pub fn complement(&self, n: usize) -> Self {
        IndexSet((0..n).filter(|i| !self.contains(*i)).collect())
    }

    pub fn with(&self, index: usize) -> Self {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&index) {
            v.insert(pos, index);
        }
        IndexSet(v)
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Position of `index` inside the set.
    pub fn position(&self, index: usize) -> Option<usize> {
        self.0.binary_search(&index).ok()
    }

    /// All `k`-subsets of `0..n` in lexicographic order.
    pub fn subsets(n: usize, k: usize) -> impl Iterator<Item = IndexSet> {
        (0..n).combinations(k).map(IndexSet)
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.0.is_empty() {
            return Err(domain("index set is empty"));
        }
        match self.0.last() {
            Some(&last) if last >= n => Err(domain(format!(
                "index {last} out of range for dimension {n}"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, i) in self.0.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// Dense symmetric `n x n` matrix, stored row-major in full.
///
/// `SymMatrix<f64>` is float mode, `SymMatrix<Rational>` is exact mode.
/// Every constructor guarantees `m[i][j] == m[j][i]` bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T = f64> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    /// Builds from the upper triangle of `f(i, j)` (`i <= j`), mirrored below.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(n >= 1, "dimension must be positive");
        let mut data = alloc::vec![T::zero(); n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[j * n + i] = v.clone();
                data[i * n + j] = v;
            }
        }
        SymMatrix { n, data }
    }

    /// Rejects non-square or non-symmetric input.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = Self::check_square(&rows)?;
        for i in 0..n {
            for j in i + 1..n {
                if rows[i][j] != rows[j][i] {
                    return Err(domain(format!("entry ({i},{j}) differs from ({j},{i})")));
                }
            }
        }
        Ok(SymMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Accepts any square input and replaces it by `(A + A^T) / 2`.
    pub fn from_rows_symmetrized(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = Self::check_square(&rows)?;
        let two = T::from_i64(2);
        Ok(Self::from_fn(n, |i, j| {
            if i == j {
                rows[i][i].clone()
            } else {
                (rows[i][j].clone() + rows[j][i].clone()) / two.clone()
            }
        }))
    }

    fn check_square(rows: &[Vec<T>]) -> Result<usize> {
        let n = rows.len();
        if n == 0 {
            return Err(domain("matrix must have at least one row"));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(domain(format!("row {bad} has length {} (expected {n})", rows[bad].len())));
        }
        Ok(n)
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_diagonal(d: &[T]) -> Self {
        Self::from_fn(d.len(), |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        if T::EXACT {
            Mode::Exact
        } else {
            Mode::Float
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n).map(<[T]>::to_vec).collect()
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> SymMatrix<U> {
        SymMatrix::from_fn(self.n, |i, j| f(self.get(i, j)))
    }

    pub fn to_f64(&self) -> SymMatrix<f64> {
        self.map(Scalar::to_f64)
    }

    pub fn scaled(&self, factor: &T) -> Self {
        self.map(|x| x.clone() * factor.clone())
    }

    /// `self + t I`.
    pub fn shifted(&self, t: &T) -> Self {
        Self::from_fn(self.n, |i, j| {
            let v = self.get(i, j).clone();
            if i == j {
                v + t.clone()
            } else {
                v
            }
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.n != self.n {
            return Err(domain("dimension mismatch"));
        }
        Ok(Self::from_fn(self.n, |i, j| {
            self.get(i, j).clone() + other.get(i, j).clone()
        }))
    }

    /// The principal submatrix on rows and columns `s`.
    pub fn principal_submatrix(&self, s: &IndexSet) -> Result<Self> {
        s.check(self.n)?;
        let idx = s.as_slice();
        Ok(Self::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]).clone()))
    }

    /// `det(M|_S)`; exact in exact mode.
    pub fn principal_minor(&self, s: &IndexSet) -> Result<T> {
        s.check(self.n)?;
        let idx = s.as_slice();
        let mut buf = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            for &j in idx {
                buf.push(self.get(i, j).clone());
            }
        }
        Ok(T::determinant(buf, idx.len()))
    }

    pub fn determinant(&self) -> T {
        T::determinant(self.data.clone(), self.n)
    }

    /// `D M D` with `D = diag(d)`.
    pub fn diagonal_congruence(&self, d: &[T]) -> Result<Self> {
        if d.len() != self.n {
            return Err(domain(format!(
                "scaling vector has length {} (expected {})",
                d.len(),
                self.n
            )));
        }
        Ok(Self::from_fn(self.n, |i, j| {
            d[i].clone() * d[j].clone() * self.get(i, j).clone()
        }))
    }

    /// Schur complement with respect to the diagonal entry `i`:
    /// `M|_{[n]\{i}} - (1/M_ii) m_i m_i^T` where `m_i` is column `i` without
    /// entry `i`. Float pivots with `|M_ii| <= pivot_tol` are rejected.
    pub fn schur_complement(&self, i: usize, pivot_tol: f64) -> Result<Self> {
        if i >= self.n {
            return Err(domain(format!("index {i} out of range")));
        }
        if self.n == 1 {
            return Err(domain("Schur complement of a 1x1 matrix is empty"));
        }
        let pivot = self.get(i, i).clone();
        if pivot.is_zero() || pivot.is_negligible(pivot_tol) {
            return Err(Error::ZeroPivot { index: i });
        }
        let rest: Vec<usize> = (0..self.n).filter(|&r| r != i).collect();
        Ok(Self::from_fn(self.n - 1, |a, b| {
            let (ra, rb) = (rest[a], rest[b]);
            self.get(ra, rb).clone()
                - self.get(ra, i).clone() * self.get(i, rb).clone() / pivot.clone()
        }))
    }

    pub fn inverse(&self, tol: f64) -> Result<Self> {
        let inv = linalg::invert(&self.data, self.n, tol)?;
        let n = self.n;
        let two = T::from_i64(2);
        Ok(Self::from_fn(n, |i, j| {
            if i == j || T::EXACT {
                inv[i * n + j].clone()
            } else {
                (inv[i * n + j].clone() + inv[j * n + i].clone()) / two.clone()
            }
        }))
    }

    /// `|det(M|_S) - det(M) det(M^{-1}|_{S^c})|` for `∅ ⊊ S ⊊ [n]`.
    ///
    /// Zero in exact mode whenever the complementary-minor identity holds.
    pub fn jacobi_identity_residual(&self, s: &IndexSet) -> Result<T> {
        s.check(self.n)?;
        if s.len() == self.n {
            return Err(domain("index set must be a proper subset"));
        }
        let det = self.determinant();
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let inv = self.inverse(0.0)?;
        let lhs = self.principal_minor(s)?;
        let rhs = det * inv.principal_minor(&s.complement(self.n))?;
        Ok((lhs - rhs).magnitude())
    }
}

/// `G(n, k) = k/(k-1) I - 1/(k-1) 11^T`: unit diagonal, off-diagonal `-1/(k-1)`.
pub fn gram_g<T: Scalar>(n: usize, k: usize) -> Result<SymMatrix<T>> {
    if k < 2 || k > n {
        return Err(domain(format!("G(n,k) needs 2 <= k <= n (got n={n}, k={k})")));
    }
    let off = T::from_ratio(-1, k as i64 - 1);
    Ok(SymMatrix::from_fn(n, |i, j| if i == j { T::one() } else { off.clone() }))
}

/// Exact `G(n, k)`.
pub fn gram_g_exact(n: usize, k: usize) -> Result<SymMatrix<Rational>> {
    gram_g(n, k)
}

/// Result of a PSD test: the verdict and the smallest eigenvalue as witness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub psd: bool,
    pub min_eigenvalue: f64,
}

impl SymMatrix<f64> {
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// PSD iff the smallest eigenvalue is `>= -tol`.
    pub fn is_psd(&self, tol: f64) -> Result<PsdCheck> {
        let min_eigenvalue = spectra::min_eigenvalue(self)?;
        Ok(PsdCheck {
            psd: min_eigenvalue >= -tol,
            min_eigenvalue,
        })
    }

    /// Per-index magnitudes used to scale determinant tolerances.
    ///
    /// `|M_ii|` when nonzero, otherwise the largest entry of row `i`, otherwise
    /// one. The product over `S` is invariant under diagonal congruence, so
    /// singularity tests on `D M D` agree with those on `M`.
    pub fn minor_scales(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let d = self.get(i, i).abs();
                if d > 0.0 {
                    d
                } else {
                    let r = self.row(i).iter().fold(0.0f64, |m, x| m.max(x.abs()));
                    if r > 0.0 {
                        r
                    } else {
                        1.0
                    }
                }
            })
            .collect()
    }

    /// Tolerance for `|det(M|_S)|` given a relative tolerance.
    pub fn minor_tolerance(&self, s: &IndexSet, tol: f64) -> f64 {
        let scales = self.minor_scales();
        s.iter().map(|i| scales[i]).product::<f64>() * tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::new(v.to_vec()).unwrap()
    }

    fn q(p: i64, d: i64) -> Rational {
        Rational::from_ratio(p, d)
    }

    #[test]
    fn submatrix_of_g42() {
        let g = gram_g::<f64>(4, 2).unwrap();
        let sub = g.principal_submatrix(&set(&[0, 1])).unwrap();
        assert_eq!(sub.rows(), vec![vec![1.0, -1.0], vec![-1.0, 1.0]]);
    }

    #[test]
    fn submatrix_full_set_is_identity_map() {
        let m = SymMatrix::from_fn(3, |i, j| (i * 3 + j) as f64);
        assert_eq!(m.principal_submatrix(&IndexSet::full(3)).unwrap(), m);
    }

    #[test]
    fn submatrix_of_g53_exact() {
        let g = gram_g_exact(5, 3).unwrap();
        let sub = g.principal_submatrix(&set(&[1, 3])).unwrap();
        assert_eq!(sub.rows(), vec![vec![q(1, 1), q(-1, 2)], vec![q(-1, 2), q(1, 1)]]);
    }

    #[test]
    fn submatrix_rejects_bad_sets() {
        let g = gram_g::<f64>(4, 2).unwrap();
        assert!(matches!(
            g.principal_submatrix(&IndexSet::new(vec![]).unwrap()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(g.principal_submatrix(&set(&[0, 4])), Err(Error::Domain(_))));
        assert!(IndexSet::new(vec![1, 1]).is_err());
    }

    #[test]
    fn minors_of_g42() {
        let g = gram_g_exact(4, 2).unwrap();
        assert_eq!(g.principal_minor(&set(&[0, 1])).unwrap(), q(0, 1));
        assert_eq!(g.principal_minor(&set(&[0, 1, 2])).unwrap(), q(-4, 1));
        assert_eq!(g.determinant(), q(-16, 1));
        let i4 = SymMatrix::<Rational>::identity(4);
        assert_eq!(i4.principal_minor(&set(&[0, 2, 3])).unwrap(), q(1, 1));
    }

    #[test]
    fn psd_checks() {
        let i3 = SymMatrix::<f64>::identity(3);
        assert!(i3.is_psd(0.0).unwrap().psd);
        let g = gram_g::<f64>(4, 2).unwrap();
        let check = g.is_psd(1e-9).unwrap();
        assert!(!check.psd);
        assert!((check.min_eigenvalue + 2.0).abs() < 1e-12);
        let ones = SymMatrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(ones.is_psd(0.0).unwrap().psd);
    }

    #[test]
    fn congruence_examples() {
        let g = gram_g::<f64>(4, 2).unwrap();
        assert_eq!(g.diagonal_congruence(&[1.0; 4]).unwrap(), g);
        let m = g.diagonal_congruence(&[2.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(m.diagonal(), vec![4.0, 1.0, 1.0, 1.0]);
        assert_eq!(m.row(0)[1..].to_vec(), vec![-2.0, -2.0, -2.0]);
        assert_eq!(*m.get(1, 2), -1.0);
        let d = [0.3, -1.2, 2.0, 0.7];
        let neg: Vec<f64> = d.iter().map(|x| -x).collect();
        assert_eq!(g.diagonal_congruence(&d).unwrap(), g.diagonal_congruence(&neg).unwrap());
        assert!(g.diagonal_congruence(&[1.0; 3]).is_err());
    }

    #[test]
    fn schur_complement_examples() {
        let a = SymMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 5.0]]).unwrap();
        assert_eq!(a.schur_complement(0, 0.0).unwrap().rows(), vec![vec![5.0]]);
        let b = SymMatrix::from_rows(vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(2, 1)]]).unwrap();
        assert_eq!(b.schur_complement(0, 0.0).unwrap().rows(), vec![vec![q(3, 2)]]);
        let z = SymMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 2.0]]).unwrap();
        assert_eq!(z.schur_complement(0, 1e-12), Err(Error::ZeroPivot { index: 0 }));
    }

    #[test]
    fn gram_g_entries_and_domain() {
        let g = gram_g_exact(5, 5).unwrap();
        assert_eq!(*g.get(0, 0), q(1, 1));
        assert_eq!(*g.get(0, 4), q(-1, 4));
        assert_eq!(*gram_g_exact(5, 3).unwrap().get(2, 3), q(-1, 2));
        assert!(gram_g::<f64>(4, 1).is_err());
        assert!(gram_g::<f64>(3, 4).is_err());
    }

    #[test]
    fn jacobi_identity_examples() {
        let i4 = SymMatrix::<Rational>::identity(4);
        assert_eq!(i4.jacobi_identity_residual(&set(&[0, 1])).unwrap(), q(0, 1));
        let d = SymMatrix::from_diagonal(&[q(2, 1), q(3, 1), q(5, 1)]);
        assert_eq!(d.jacobi_identity_residual(&set(&[0])).unwrap(), q(0, 1));
        let sing = SymMatrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(sing.jacobi_identity_residual(&set(&[0])), Err(Error::Singular));
    }

    #[test]
    fn construction_rejects_asymmetry_unless_asked() {
        let rows = vec![vec![1.0, 2.0], vec![0.0, 1.0]];
        assert!(SymMatrix::from_rows(rows.clone()).is_err());
        let m = SymMatrix::from_rows_symmetrized(rows).unwrap();
        assert_eq!(*m.get(0, 1), 1.0);
        assert!(SymMatrix::<f64>::from_rows(vec![vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn inverse_of_g42_is_quarter_g42() {
        let g = gram_g_exact(4, 2).unwrap();
        assert_eq!(g.inverse(0.0).unwrap(), g.scaled(&q(1, 4)));
    }

    #[test]
    fn minor_tolerance_invariant_under_congruence() {
        let g = gram_g::<f64>(4, 2).unwrap();
        let m = g.diagonal_congruence(&[4.0, 0.25, 1.0, 2.0]).unwrap();
        let s = set(&[0, 1, 3]);
        assert!((m.minor_tolerance(&s, 1.0) - 16.0 * 0.0625 * 4.0).abs() < 1e-12);
    }
}
