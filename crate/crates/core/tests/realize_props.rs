use lpsd_core::cones::{in_h_e, in_s_nk, Verdict};
use lpsd_core::nls::{is_locally_singular, is_nls_exact};
use lpsd_core::realize::{dgd_family, realize_boundary_nminus1, realize_h_nminus1, realize_k1, spectrum_residual};
use lpsd_core::spectra::eigenvalues_sym;
use lpsd_core::{IndexSet, Rational, Scalar};
use num_traits::Zero;
use proptest::prelude::*;

/// Boundary point of `H(e_{n-1})` with one negative entry, at position `at`.
fn boundary_point(pos: &[f64], at: usize) -> Vec<f64> {
    let mut x = pos.to_vec();
    x.insert(at.min(x.len()), -1.0 / pos.iter().map(|v| 1.0 / v).sum::<f64>());
    x
}

fn member_of(n: usize) -> impl Strategy<Value = Vec<f64>> {
    (prop::collection::vec(0.1f64..3.0, n - 1), 0..n, 0.0f64..1.0, 0u8..3).prop_map(|(pos, at, c, kind)| {
        let x = boundary_point(&pos, at);
        match kind {
            0 => x,
            1 => x.iter().map(|v| v + c).collect(),
            _ => x.iter().map(|v| v.abs() * c).collect(),
        }
    })
}

fn member() -> impl Strategy<Value = Vec<f64>> {
    (3usize..=8).prop_flat_map(member_of)
}

proptest! {
    #[test]
    fn realizations_have_requested_spectrum(x in member()) {
        let n = x.len();
        let r = realize_h_nminus1(&x, 1e-9).unwrap();
        prop_assert!(spectrum_residual(&r.matrix, &x).unwrap() <= 1e-8);
        prop_assert!(in_s_nk(&r.matrix, n - 1, 1e-8).unwrap().verdict != Verdict::Outside);
    }

    #[test]
    fn k1_realization_is_diagonal(x in prop::collection::vec(0.0f64..3.0, 1..=8)) {
        let r = realize_k1(&x, 1e-9).unwrap();
        prop_assert!(spectrum_residual(&r.matrix, &x).unwrap() <= 1e-12);
        prop_assert!(in_s_nk(&r.matrix, 1, 1e-9).unwrap().verdict.is_member());
    }

    #[test]
    fn boundary_minors_vanish(pos in prop::collection::vec(0.1f64..3.0, 2..=7), at in 0usize..8) {
        let x = boundary_point(&pos, at);
        prop_assume!(in_h_e(&x, x.len() - 1, 1e-9).unwrap().verdict == Verdict::Boundary);
        let n = x.len();
        let m = realize_boundary_nminus1(&x, 1e-9).unwrap().matrix;
        let norm = m.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt();
        for s in IndexSet::subsets(n, n - 1) {
            let sub = m.principal_submatrix(&s).unwrap();
            prop_assert!(sub.determinant().abs() <= 1e-8 * norm.powi(n as i32 - 1));
            prop_assert!(eigenvalues_sym(&sub).unwrap().min() >= -1e-8 * norm);
        }
    }

    #[test]
    fn realizable_spectra_are_convex(
        (x, y) in (3usize..=8).prop_flat_map(|n| (member_of(n), member_of(n))),
        theta in 0.0f64..=1.0,
    ) {
        let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| theta * a + (1.0 - theta) * b).collect();
        let r = realize_h_nminus1(&mid, 1e-9).unwrap();
        prop_assert!(spectrum_residual(&r.matrix, &mid).unwrap() <= 1e-8);
    }

    #[test]
    fn scaled_gram_is_nls(
        (n, k) in (3usize..=7).prop_flat_map(|n| (Just(n), 2..n)),
        d in prop::collection::vec((1i64..=9, 1i64..=4, any::<bool>()), 7),
    ) {
        let d: Vec<Rational> = d[..n].iter().map(|&(p, q, neg)| Rational::from_ratio(if neg { -p } else { p }, q)).collect();
        let m = dgd_family(n, k, &d).unwrap();
        prop_assert!(!m.determinant().is_zero());
        prop_assert!(is_nls_exact(&m, k).unwrap());
        prop_assert!(is_locally_singular(&m.to_f64(), k, 1e-9).unwrap());
    }
}

#[test]
fn midpoints_of_nonnegative_and_boundary_points() {
    let x = boundary_point(&[1.0, 2.0, 4.0], 0);
    let y = vec![0.0, 1.0, 0.0, 3.0];
    for i in 0..=10 {
        let t = i as f64 / 10.0;
        let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| t * a + (1.0 - t) * b).collect();
        let r = realize_h_nminus1(&mid, 1e-9).unwrap();
        assert!(spectrum_residual(&r.matrix, &mid).unwrap() <= 1e-8);
    }
}
