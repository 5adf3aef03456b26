//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p lpsd-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lpsd_core::cones::{
    in_h_e, in_h_e_nminus1_psd_test_at, in_s_nk, frobenius_dist_bound, frobenius_dist_to_psd,
    min_eig_bound, norm_value, BoundSpec, Norm, Verdict,
};
use lpsd_core::nls::{enumerate_sign_cases_42, verify_structure_theorem, SignVerdict};
use lpsd_core::quartic::{
    find_almost_nonneg_k, hermite_verdict, power_sums, quartic_from_roots, quartic_real_roots,
    HermiteVerdict, QuarticPoly,
};
use lpsd_core::realize::{dgd_family, realize_h_nminus1, sample_s_nk_indexed, spectrum_residual, Strategy};
use lpsd_core::spectra::{char_poly_coeffs, eigenvalues_sym};
use lpsd_core::symmat::gram_g;
use lpsd_core::{IndexSet, Rational, Scalar, SymMatrix};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn strategy(i: u64) -> Strategy {
    match i % 3 {
        0 => Strategy::Rejection,
        1 => Strategy::Congruence,
        _ => Strategy::PsdMix { psd_weight: None },
    }
}

fn c1_minor_vanishing() -> Outcome {
    let start = Instant::now();
    let mut minors = 0usize;
    for n in 3..=10 {
        for k in 2..n {
            let g = gram_g::<Rational>(n, k).unwrap();
            for s in IndexSet::subsets(n, k) {
                minors += 1;
                if !g.principal_minor(&s).unwrap().is_zero() {
                    return outcome(false, format!("nonzero minor n={n} k={k} S={s}"));
                }
            }
            if g.determinant().is_zero() {
                return outcome(false, format!("singular G({n},{k})"));
            }
        }
    }
    let t = start.elapsed();
    outcome(t < Duration::from_secs(10), format!("{minors} minors exactly zero, {t:.2?}"))
}

fn c2_trace_bound() -> Outcome {
    for n in 2..=12usize {
        for k in 2..=n {
            let spec = BoundSpec::new(Norm::Trace, n, k).unwrap();
            let b = min_eig_bound(&spec);
            let exact = Rational::from_ratio(k as i64 - n as i64, (n * (k - 1)) as i64);
            if (b - Scalar::to_f64(&exact)).abs() > 1e-15 {
                return outcome(false, format!("closed form mismatch n={n} k={k}: {b}"));
            }
            // b is an eigenvalue of G(n,k)/n, exactly
            let shifted = gram_g::<Rational>(n, k)
                .unwrap()
                .scaled(&Rational::from_ratio(1, n as i64))
                .shifted(&-exact);
            if !shifted.determinant().is_zero() {
                return outcome(false, format!("bound is not an eigenvalue of G/n for n={n} k={k}"));
            }
        }
    }
    let mut worst_gap = f64::INFINITY;
    for (n, k) in [(4, 2), (5, 3), (6, 4)] {
        let spec = BoundSpec::new(Norm::Trace, n, k).unwrap();
        let bound = min_eig_bound(&spec);
        for i in 0..1000u64 {
            let m = sample_s_nk_indexed(n, k, 2024, i, strategy(i)).unwrap();
            let tr = m.trace();
            if tr <= 0.0 {
                continue;
            }
            let lam = eigenvalues_sym(&m.scaled(&(1.0 / tr))).unwrap().min();
            worst_gap = worst_gap.min(lam - bound);
            if lam < bound - 1e-9 {
                return outcome(false, format!("sample {i} for ({n},{k}) has lambda_1 {lam} < {bound}"));
            }
        }
        let g = gram_g::<f64>(n, k).unwrap();
        let lam = eigenvalues_sym(&g.scaled(&(1.0 / n as f64))).unwrap().min();
        if (lam - bound).abs() > 1e-12 {
            return outcome(false, format!("G({n},{k})/n gives {lam}, bound {bound}"));
        }
    }
    outcome(true, format!("closed form exact for n<=12; 3000 samples, min slack {worst_gap:.3e}"))
}

fn c3_frobenius_distance() -> Outcome {
    let start = Instant::now();
    let b42 = frobenius_dist_bound(4, 2).unwrap();
    if (b42 - 2.0 * 2f64.sqrt() / 4.0).abs() > 1e-12 {
        return outcome(false, format!("bound(4,2) = {b42}"));
    }
    let mut worst = f64::NEG_INFINITY;
    for (n, k) in [(4, 2), (5, 3), (6, 3), (7, 5)] {
        let bound = frobenius_dist_bound(n, k).unwrap();
        for i in 0..1000u64 {
            let m = sample_s_nk_indexed(n, k, 77, i, strategy(i)).unwrap();
            let f = norm_value(&m, Norm::Frobenius).unwrap();
            let d = frobenius_dist_to_psd(&m.scaled(&(1.0 / f))).unwrap();
            worst = worst.max(d - bound);
            if d > bound + 1e-9 {
                return outcome(false, format!("({n},{k}) sample {i}: {d} > {bound}"));
            }
        }
    }
    let t = start.elapsed();
    outcome(
        t < Duration::from_secs(60),
        format!("bound(4,2) = {b42:.5}; 4000 samples, max excess {worst:.3e}, {t:.2?}"),
    )
}

fn c4_sign_cases() -> Outcome {
    let start = Instant::now();
    let cases = match enumerate_sign_cases_42() {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("{e}")),
    };
    let t = start.elapsed();
    let congruent = cases.iter().filter(|c| c.verdict == SignVerdict::CongruentToG).count();
    outcome(
        cases.len() == 64 && t < Duration::from_secs(1),
        format!("64 cases: {congruent} congruent to G(4,2), {} singular, 0 unlabeled, {t:.2?}", 64 - congruent),
    )
}

/// Points of `H(e_{n-1}^n)` built without the library: boundary points with
/// one negative entry (reciprocal sum zero), shifts of them into the
/// interior, and nonnegative vectors.
fn h_nminus1_point(n: usize, rng: &mut ChaCha8Rng, kind: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(0.1..2.0)).collect();
    let neg = -1.0 / x.iter().map(|v| 1.0 / v).sum::<f64>();
    x.push(neg);
    match kind {
        0 => {}
        1 => {
            let c: f64 = rng.gen_range(0.0..1.0);
            x.iter_mut().for_each(|v| *v += c);
        }
        _ => x.iter_mut().for_each(|v| *v = v.abs()),
    }
    let i = rng.gen_range(0..n);
    x.swap(i, n - 1);
    x
}

fn c5_realization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in 3..=8 {
        let points: Vec<Vec<f64>> = (0..100).map(|i| h_nminus1_point(n, &mut rng, i % 3)).collect();
        let mut check = |x: &[f64], what: &str| -> Result<(), String> {
            let r = realize_h_nminus1(x, 1e-9).map_err(|e| format!("{what} n={n} {x:?}: {e}"))?;
            let res = spectrum_residual(&r.matrix, x).unwrap();
            worst = worst.max(res);
            if res > 1e-8 {
                return Err(format!("{what} n={n}: residual {res}"));
            }
            if in_s_nk(&r.matrix, n - 1, 1e-8).unwrap().verdict == Verdict::Outside {
                return Err(format!("{what} n={n}: realized matrix outside S^(n,n-1)"));
            }
            count += 1;
            Ok(())
        };
        for x in &points {
            if let Err(e) = check(x, "point") {
                return outcome(false, e);
            }
        }
        for _ in 0..100 {
            let (a, b) = (rng.gen_range(0..100), rng.gen_range(0..100));
            let theta: f64 = rng.gen_range(0.0..1.0);
            let mid: Vec<f64> = points[a]
                .iter()
                .zip(&points[b])
                .map(|(x, y)| theta * x + (1.0 - theta) * y)
                .collect();
            if let Err(e) = check(&mid, "midpoint") {
                return outcome(false, e);
            }
        }
    }
    outcome(true, format!("{count} realizations, max spectral residual {worst:.2e}"))
}

fn c6_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut compared, mut banded) = (0usize, 0usize);
    for n in 3..=8 {
        for _ in 0..10_000 {
            let c: f64 = rng.gen_range(0.0..1.5);
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0) + c).collect();
            let r = in_h_e(&x, n - 1, 1e-8).unwrap();
            if r.margin.abs() <= 1e-8 {
                banded += 1;
                continue;
            }
            let member = r.verdict != Verdict::Outside;
            for pivot in 0..n {
                let m = lpsd_core::cones::h_e_nminus1_test_matrix(&x, pivot).unwrap();
                let lam = eigenvalues_sym(&m).unwrap().min();
                let scale = x.iter().fold(1.0f64, |a, v| a.max(v.abs()));
                if lam.abs() <= 1e-8 * scale {
                    banded += 1;
                    continue;
                }
                compared += 1;
                if in_h_e_nminus1_psd_test_at(&x, pivot, 1e-8).unwrap() != member {
                    return outcome(false, format!("disagreement at {x:?}, pivot {pivot}"));
                }
            }
        }
    }
    outcome(true, format!("{compared} comparisons agree, {banded} in the boundary band"))
}

fn random_dgd_quartic(rng: &mut ChaCha8Rng) -> QuarticPoly {
    let d: Vec<f64> = (0..4)
        .map(|_| rng.gen_range(0.2..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
        .collect();
    QuarticPoly::char_poly(&dgd_family(4, 2, &d).unwrap()).unwrap()
}

/// Three positive roots and one negative root on `e_2 = 0`.
fn boundary_roots(rng: &mut ChaCha8Rng) -> [f64; 4] {
    let p: Vec<f64> = (0..3).map(|_| rng.gen_range(0.1..2.0)).collect();
    let e1: f64 = p.iter().sum();
    let e2 = p[0] * p[1] + p[0] * p[2] + p[1] * p[2];
    [p[0], p[1], p[2], -e2 / e1]
}

fn non_good_quartic(rng: &mut ChaCha8Rng, i: usize) -> QuarticPoly {
    match i % 4 {
        // boundary roots with the negative root moved off the boundary
        0 => {
            let mut r = boundary_roots(rng);
            r[3] *= if rng.gen_bool(0.5) { rng.gen_range(1.05..1.5) } else { rng.gen_range(0.5..0.95) };
            quartic_from_roots(r)
        }
        // a complex pair
        1 => {
            let (re, im) = (rng.gen_range(-1.0..2.0), rng.gen_range(0.05..1.0));
            let (a, b) = (rng.gen_range(0.1..2.0), -rng.gen_range(0.1..2.0));
            // (x^2 - 2 re x + re^2 + im^2)(x - a)(x - b)
            let (s, t) = (-2.0 * re, re * re + im * im);
            let (u, v) = (-(a + b), a * b);
            QuarticPoly::new(t * v, s * v + t * u, t + s * u + v, s + u)
        }
        // two negative roots
        2 => quartic_from_roots([
            rng.gen_range(0.1..2.0),
            rng.gen_range(0.1..2.0),
            -rng.gen_range(0.1..2.0),
            -rng.gen_range(0.1..2.0),
        ]),
        // nonnegative roots
        _ => quartic_from_roots([
            rng.gen_range(0.1..2.0),
            rng.gen_range(0.1..2.0),
            rng.gen_range(0.1..2.0),
            rng.gen_range(0.0..2.0),
        ]),
    }
}

fn c7_quartic_pipeline() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for i in 0..10_000 {
        let p = if i % 2 == 0 {
            random_dgd_quartic(&mut rng)
        } else {
            quartic_from_roots(boundary_roots(&mut rng))
        };
        let Some(cert) = find_almost_nonneg_k(&p).unwrap() else {
            return outcome(false, format!("no certificate for good-rooted {:?}", p.coeffs()));
        };
        // independent check: spectrum route for the characteristic polynomial
        let m = dgd_family(4, 2, &cert.d).unwrap();
        let back = QuarticPoly::from_char_coeffs(&char_poly_coeffs(&m).unwrap());
        let res = p.relative_distance(&back);
        worst = worst.max(res);
        if res > 1e-6 {
            return outcome(false, format!("reconstruction residual {res} for {:?}", p.coeffs()));
        }
    }
    for i in 0..10_000 {
        let p = non_good_quartic(&mut rng, i);
        if let Some(cert) = find_almost_nonneg_k(&p).unwrap() {
            return outcome(false, format!("false certificate {cert:?} for {:?}", p.coeffs()));
        }
    }
    let t = start.elapsed();
    outcome(
        t < Duration::from_secs(120),
        format!("10000 certified (max residual {worst:.2e}), 10000 non-good rejected, {t:.2?}"),
    )
}

fn c8_hermite_newton() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut compared, mut banded) = (0usize, 0usize);
    let mut worst_newton = 0.0f64;
    for i in 0..10_000 {
        let real_rooted = i % 2 == 0;
        let p = if real_rooted {
            let r: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
            let m = power_sums(&quartic_from_roots(r), 8).unwrap();
            for (k, mk) in m.iter().enumerate().skip(1) {
                let direct: f64 = r.iter().map(|v| v.powi(k as i32)).sum();
                let size: f64 = r.iter().map(|v| v.abs().powi(k as i32)).sum::<f64>().max(1e-300);
                worst_newton = worst_newton.max((mk - direct).abs() / size);
            }
            quartic_from_roots(r)
        } else {
            non_good_quartic(&mut rng, 1)
        };
        let oracle = quartic_real_roots(&p).unwrap().is_some();
        match hermite_verdict(&p, 1e-8).unwrap() {
            HermiteVerdict::Indeterminate => banded += 1,
            v => {
                compared += 1;
                if (v == HermiteVerdict::Psd) != oracle {
                    return outcome(false, format!("Hermite {v:?} vs oracle real={oracle} at {:?}", p.coeffs()));
                }
            }
        }
    }
    outcome(
        worst_newton <= 1e-10,
        format!("{compared} agree, {banded} banded; Newton max relative error {worst_newton:.2e}"),
    )
}

fn c9_jacobi_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < 1000 {
        let m = SymMatrix::from_fn(6, |_, _| rng.gen_range(-1.0..1.0));
        if m.determinant().abs() < 1e-3 {
            continue;
        }
        let size = rng.gen_range(1..6);
        let mut idx: Vec<usize> = (0..6).collect();
        for i in 0..6 {
            let j = rng.gen_range(i..6);
            idx.swap(i, j);
        }
        let s = IndexSet::new(idx[..size].to_vec()).unwrap();
        let lhs = m.principal_minor(&s).unwrap();
        let res = m.jacobi_identity_residual(&s).unwrap();
        let rel = res / lhs.abs().max(m.determinant().abs());
        worst = worst.max(rel);
        done += 1;
    }
    let mut exact_done = 0;
    while exact_done < 100 {
        let m = SymMatrix::from_fn(5, |_, _| Rational::from_ratio(rng.gen_range(-9..10), rng.gen_range(1..7)));
        if m.determinant().is_zero() {
            continue;
        }
        let size = rng.gen_range(1..5);
        let s = IndexSet::new((0..5).filter(|_| rng.gen_bool(0.5)).take(size).collect()).ok();
        let s = match s {
            Some(s) if !s.is_empty() && s.len() < 5 => s,
            _ => IndexSet::new(vec![0, 2]).unwrap(),
        };
        if !m.jacobi_identity_residual(&s).unwrap().is_zero() {
            return outcome(false, format!("nonzero exact residual for S={s}"));
        }
        exact_done += 1;
    }
    outcome(worst <= 1e-8, format!("float max relative residual {worst:.2e}; 100 exact residuals zero"))
}

fn c10_structure() -> Outcome {
    let mut lines = Vec::new();
    for (n, k) in [(4, 2), (5, 3), (6, 4), (7, 3), (7, 5)] {
        let r = verify_structure_theorem(n, k, 100, 10).unwrap();
        let worst = r.samples.iter().map(|s| s.round_trip_error).fold(0.0, f64::max);
        let signs_ok = k + 2 != n || r.samples.iter().all(|s| s.minor_signs == Some(true));
        if !r.all_passed || worst > 1e-9 || !signs_ok {
            let bad = r.samples.iter().find(|s| !s.passed);
            return outcome(false, format!("({n},{k}) failed: {bad:?}"));
        }
        lines.push(format!("({n},{k}) rt {worst:.1e}"));
    }
    outcome(true, format!("500 instances recovered; {}", lines.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 minor vanishing (exact)", c1_minor_vanishing),
        ("2 trace bound", c2_trace_bound),
        ("3 Frobenius distance bound", c3_frobenius_distance),
        ("4 base-case sign enumeration", c4_sign_cases),
        ("5 realization for k = n-1", c5_realization),
        ("6 PSD reformulation of H(e_(n-1))", c6_oracle_equivalence),
        ("7 quartic certificate pipeline", c7_quartic_pipeline),
        ("8 Hermite and Newton validation", c8_hermite_newton),
        ("9 Jacobi complementary minors", c9_jacobi_identity),
        ("10 structure-theorem recovery", c10_structure),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("[{status}] criterion {name}: {} ({:.2?})", o.detail, start.elapsed());
        failed += usize::from(!o.passed);
    }
    if failed == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
