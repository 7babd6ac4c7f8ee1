use num_complex::Complex64 as C;
use proptest::prelude::*;
use std::f64::consts::PI;
use vinberg::wigner_limit::*;
use vinberg::{Error, ZeroBehavior};

fn wp(c: f64, v: f64) -> WignerLawParams {
    WignerLawParams::new(c, v).unwrap()
}

/// Roots of `a3 x³ + a2 x² + a1 x + a0` by Durand-Kerner.
fn dk_roots(a: [C; 4]) -> [C; 3] {
    let (b2, b1, b0) = (a[2] / a[3], a[1] / a[3], a[0] / a[3]);
    let p = |x: C| ((x + b2) * x + b1) * x + b0;
    let mut r = [C::new(0.4, 0.9), C::new(0.4, 0.9).powu(2), C::new(0.4, 0.9).powu(3)];
    for _ in 0..2000 {
        let old = r;
        for i in 0..3 {
            let mut den = C::new(1.0, 0.0);
            for j in 0..3 {
                if i != j {
                    den *= r[i] - r[j];
                }
            }
            r[i] -= p(r[i]) / den;
        }
        if (0..3).all(|i| (r[i] - old[i]).norm() < 1e-16 * (1.0 + r[i].norm())) {
            break;
        }
    }
    r
}

/// Oracle density: on the real axis the cubic has one root in the open upper
/// half-plane exactly where the density is positive.
fn oracle_density(t: f64, c: f64, v: f64) -> f64 {
    let z = C::new(t, 0.0);
    let z2 = z * z;
    let coeffs = [z2 - c * c * v, (z2 + 2.0 * v * (1.0 - c)) * z, 2.0 * v * z2 + (1.0 - 2.0 * c) * v * v, v * v * z];
    let im = dk_roots(coeffs).iter().map(|r| r.im).fold(0.0f64, f64::max);
    if im < 1e-7 {
        0.0
    } else {
        im / PI
    }
}

fn residual(s: C, z: C, c: f64, v: f64) -> f64 {
    (v * v * z * s * s * s + (2.0 * v * z * z + (1.0 - 2.0 * c) * v * v) * s * s + (z * z + 2.0 * v * (1.0 - c)) * z * s + z * z
        - c * c * v)
        .norm()
}

#[test]
fn edge_point_examples() {
    let (a, b) = edge_points(1e-9).unwrap();
    assert!((a - 1.0).abs() < 1e-3 && (b - 1.0).abs() < 1e-3);
    let (a, b) = edge_points(0.0).unwrap();
    assert!((a - 1.0).abs() < 1e-15 && (b - 1.0).abs() < 1e-15);
    let (a, b) = edge_points(0.5).unwrap();
    assert!(a.abs() < 1e-14 && (b - 27.0 / 8.0).abs() < 1e-14);
    let (_, b) = edge_points(1.0 - 1e-9).unwrap();
    assert!((b - 4.0).abs() < 1e-3);
    let (a, b) = edge_points(1.0).unwrap();
    assert!(a == f64::NEG_INFINITY && b == 4.0);
    assert!(matches!(edge_points(1.5), Err(Error::Domain(_))));
}

#[test]
fn edges_monotone() {
    let mut prev = edge_points(0.05).unwrap();
    for i in 2..20 {
        let cur = edge_points(0.05 * i as f64).unwrap();
        assert!(cur.0 < prev.0 && cur.1 > prev.1, "c = {}", 0.05 * i as f64);
        prev = cur;
    }
}

#[test]
fn edges_are_density_endpoints() {
    for c in [0.1, 0.3, 0.45] {
        let (a, b) = edge_points(c).unwrap();
        let (ra, rb) = (a.sqrt(), b.sqrt());
        assert!(oracle_density(ra - 1e-4, c, 1.0) == 0.0 && oracle_density(ra + 1e-4, c, 1.0) > 0.0);
        assert!(oracle_density(rb + 1e-4, c, 1.0) == 0.0 && oracle_density(rb - 1e-4, c, 1.0) > 0.0);
    }
}

#[test]
fn density_examples() {
    assert!((wigner_density(0.0, wp(1.0, 1.0)) - 1.0 / PI).abs() < 1e-15);
    assert!((wigner_density(0.0, wp(0.8, 1.0)) - 0.8 / (PI * 0.6f64.sqrt())).abs() < 1e-14);
    assert_eq!(wigner_density(3.0, wp(0.3, 1.0)), 0.0);
    assert_eq!(wigner_density(0.0, wp(0.5, 1.0)), f64::INFINITY);
    assert_eq!(wigner_density(0.0, wp(0.3, 1.0)), 0.0);
}

#[test]
fn density_zero_limit_matches_closed_form() {
    for c in [0.6, 0.8, 0.95] {
        let near = wigner_density(1e-6, wp(c, 1.0));
        assert!((near - wigner_density(0.0, wp(c, 1.0))).abs() < 1e-5, "{c}");
    }
}

#[test]
fn density_matches_cubic_oracle() {
    for c in [0.1, 0.3, 0.5, 0.7, 0.9] {
        for v in [1.0f64, 2.5] {
            for i in 1..60 {
                let t = (-4.5 + 9.0 * i as f64 / 60.0) * v.sqrt();
                if t.abs() < 1e-12 {
                    continue;
                }
                let d = wigner_density(t, wp(c, v));
                let o = oracle_density(t, c, v);
                assert!((d - o).abs() < 1e-8, "c={c} v={v} t={t}: {d} vs {o}");
            }
        }
    }
}

#[test]
fn law_examples() {
    let l = wigner_law(wp(0.3, 1.0));
    assert_eq!(l.atoms().len(), 1);
    assert!((l.atoms()[0].mass - 0.4).abs() < 1e-15 && l.atoms()[0].loc == 0.0);
    assert_eq!(l.support().len(), 2);
    let l = wigner_law(wp(0.5, 2.0));
    assert!(l.atoms().is_empty());
    let r = (27.0 * 2.0 / 8.0f64).sqrt();
    assert_eq!(l.support().len(), 1);
    assert!((l.support()[0].0 + r).abs() < 1e-14 && (l.support()[0].1 - r).abs() < 1e-14);
    let l = wigner_law(wp(1.0, 1.0));
    assert!(l.atoms().is_empty() && (l.support()[0].0 + 2.0).abs() < 1e-15 && (l.support()[0].1 - 2.0).abs() < 1e-15);
    let l = wigner_law(wp(0.0, 1.0));
    assert_eq!(l.atoms().len(), 1);
    assert_eq!(l.atoms()[0].mass, 1.0);
    assert_eq!(wigner_law(wp(0.3, 1.0)).zero_behavior(), ZeroBehavior::Atom(1.0 - 0.6));
    assert_eq!(wigner_law(wp(0.5, 1.0)).zero_behavior(), ZeroBehavior::InfiniteLimit);
}

#[test]
fn normalization() {
    for c in [0.05, 0.2, 0.3, 0.5, 0.8, 0.99, 1.0] {
        for v in [0.5, 1.0, 3.0] {
            let m = wigner_law(wp(c, v)).total_mass();
            assert!((m - 1.0).abs() < 1e-6, "c={c} v={v}: {m}");
        }
    }
}

#[test]
fn normalization_by_simple_quadrature() {
    // t = ±s² substitution near the c = 1/2 singularity, midpoint rule
    let r = (27.0f64 / 8.0).sqrt();
    let n = 200_000;
    let h = r.sqrt() / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let s = (i as f64 + 0.5) * h;
        total += 2.0 * wigner_density(s * s, wp(0.5, 1.0)) * 2.0 * s * h;
    }
    assert!((total - 1.0).abs() < 1e-5, "{total}");
}

#[test]
fn stieltjes_examples() {
    let z = C::new(0.4, 0.7);
    assert_eq!(wigner_stieltjes(z, wp(0.0, 1.0)).unwrap(), -1.0 / z);
    let s = wigner_stieltjes(C::new(0.0, 2.0), wp(1.0, 1.0)).unwrap();
    assert!((s - C::new(0.0, 2f64.sqrt() - 1.0)).norm() < 1e-15);
    let z = C::new(0.0, 100.0);
    for c in [0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0] {
        let s = wigner_stieltjes(z, wp(c, 1.0)).unwrap();
        assert!((s + 1.0 / z).norm() <= 1e-3);
    }
    assert!(matches!(wigner_stieltjes(C::new(1.0, 0.0), wp(0.5, 1.0)), Err(Error::Domain(_))));
    assert!(matches!(wigner_stieltjes(C::new(1.0, -1.0), wp(0.5, 1.0)), Err(Error::Domain(_))));
}

#[test]
fn cubic_discriminant_relation() {
    for c in [0.2, 0.6] {
        let cc = cubic_coefficients(C::new(0.3, 0.8), wp(c, 1.0));
        let d = -(4.0 * cc.p_of_z.powu(3) + 27.0 * cc.q_of_z.powu(2));
        assert!((cc.disc - d).norm() < 1e-12 * (1.0 + d.norm()));
    }
}

#[test]
fn density_transform_consistency() {
    let p = wp(0.7, 1.0);
    let b = edge_points(0.7).unwrap().1.sqrt();
    for i in 1..20 {
        let t = -b + 2.0 * b * i as f64 / 20.0;
        let est = vinberg::profile_solver::density_from_stieltjes(|z| wigner_stieltjes(z, p), t, &[1e-2, 1e-3, 1e-4]).unwrap();
        let d = wigner_density(t, p);
        assert!((est - d).abs() < 1e-4, "{t}: {est} vs {d}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn prop_cubic_and_system(c in 0.0f64..1.0, v in 0.2f64..4.0, x in -5.0f64..5.0, ly in -3.0f64..1.5) {
        let z = C::new(x, 10f64.powf(ly));
        let s = wigner_stieltjes(z, wp(c, v)).unwrap();
        prop_assert!(s.im > 0.0);
        prop_assert!(residual(s, z, c, v) <= 1e-10 * (1.0 + z.norm().powi(6)));
        let b = -c / (z + v * s);
        prop_assert!((s - b - (c - 1.0) / (z + v * b)).norm() <= 1e-9);
    }

    #[test]
    fn prop_density_symmetric(c in 0.01f64..1.0, t in 0.0f64..3.0) {
        let p = wp(c, 1.0);
        prop_assert_eq!(wigner_density(t, p), wigner_density(-t, p));
    }
}
