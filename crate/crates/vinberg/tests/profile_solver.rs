use num_complex::Complex64 as C;
use proptest::prelude::*;
use std::f64::consts::PI;
use vinberg::profile_solver::*;
use vinberg::wigner_limit::{wigner_stieltjes, WignerLawParams};
use vinberg::wishart_limit::{stieltjes_s, TrapezoidProfile};
use vinberg::Error;

/// Semicircle transform of variance `v`, upper-half-plane branch.
fn semicircle(z: C, v: f64) -> C {
    let r = (z * z - 4.0 * v).sqrt();
    let s = (-z + r) / (2.0 * v);
    if s.im > 0.0 {
        s
    } else {
        (-z - r) / (2.0 * v)
    }
}

/// Independent check of the discrete fixed-point equation.
fn fixed_point_gap(f: &EtaField, prof: &VarianceProfile) -> f64 {
    let m = prof.m();
    (0..m)
        .map(|i| {
            let mut acc = C::new(0.0, 0.0);
            for j in 0..m {
                acc += prof.value(i, j) * f.values[j];
            }
            (f.values[i] + 1.0 / (f.z + acc / m as f64)).norm()
        })
        .fold(0.0, f64::max)
}

#[test]
fn constant_profile_example() {
    let prof = make_profile(&ProfileKind::Constant { v: 1.0 }, 8).unwrap();
    let s = stieltjes_numeric(C::new(0.0, 2.0), &prof).unwrap();
    assert!((s - C::new(0.0, 2f64.sqrt() - 1.0)).norm() < 1e-10);
}

#[test]
fn constant_profile_semicircle() {
    for v in [0.5, 1.0, 2.0] {
        let prof = make_profile(&ProfileKind::Constant { v }, 5).unwrap();
        for z in [C::new(0.3, 0.5), C::new(-1.2, 0.2), C::new(2.5, 1.5), C::new(0.0, 0.1)] {
            let s = stieltjes_numeric(z, &prof).unwrap();
            assert!((s - semicircle(z, v)).norm() < 1e-8, "v={v} z={z}: {s}");
        }
    }
}

#[test]
fn aligned_corner_is_exact() {
    // corner edge on a grid line: the discretization is exact
    for (c, m) in [(0.3, 100), (0.75, 40)] {
        let prof = make_profile(&ProfileKind::WignerCorner { c, v: 1.5 }, m).unwrap();
        let p = WignerLawParams::new(c, 1.5).unwrap();
        for z in [C::new(0.0, 0.5), C::new(1.0, 1.0), C::new(-0.4, 2.0)] {
            let s = stieltjes_numeric(z, &prof).unwrap();
            assert!((s - wigner_stieltjes(z, p).unwrap()).norm() < 1e-8, "c={c} z={z}");
        }
    }
}

#[test]
fn aligned_rectangle_is_exact() {
    let prof = make_profile(&ProfileKind::Trapezoid { p: 0.25, alpha: 0.0, v: 1.0 }, 80).unwrap();
    let t = TrapezoidProfile::new(0.25, 0.0, 1.0).unwrap();
    for z in [C::new(0.0, 0.5), C::new(1.0, 1.0), C::new(0.2, 2.0)] {
        let s = stieltjes_numeric(z, &prof).unwrap();
        assert!((s - stieltjes_s(z, &t).unwrap()).norm() < 1e-8, "{z}");
    }
}

#[test]
fn sloped_trapezoid_converges_with_grid() {
    let t = TrapezoidProfile::new(0.4, 1.0, 1.0).unwrap();
    let z = C::new(0.5, 0.8);
    let exact = stieltjes_s(z, &t).unwrap();
    let err = |m| {
        let prof = make_profile(&ProfileKind::Trapezoid { p: 0.4, alpha: 1.0, v: 1.0 }, m).unwrap();
        (stieltjes_numeric(z, &prof).unwrap() - exact).norm()
    };
    let (coarse, fine) = (err(50), err(200));
    assert!(fine < 1e-4 && fine < coarse, "{coarse} {fine}");
}

#[test]
fn grid_cell_averages() {
    for (p, alpha) in [(0.4, 1.0), (0.3, 0.5), (0.25, 3.0)] {
        let m = 37;
        let prof = make_profile(&ProfileKind::Trapezoid { p, alpha, v: 2.0 }, m).unwrap();
        let mut total = 0.0;
        for i in 0..m {
            for j in 0..m {
                let x = prof.value(i, j);
                assert!(x >= 0.0 && x <= 2.0 + 1e-12 && x == prof.value(j, i));
                total += x;
            }
        }
        // wedge area times 2 (transpose) times v
        let area = p * (1.0 - p) - alpha * p * p / 2.0;
        assert!((total / (m * m) as f64 - 4.0 * area).abs() < 1e-12, "p={p} alpha={alpha}");
    }
    let prof = make_profile(&ProfileKind::WignerCorner { c: 0.33, v: 1.0 }, 10).unwrap();
    let total: f64 = (0..10).flat_map(|i| (0..10).map(move |j| (i, j))).map(|(i, j)| prof.value(i, j)).sum();
    assert!((total / 100.0 - (1.0 - 0.67f64.powi(2))).abs() < 1e-12);
}

#[test]
fn general_profile_grid_mass() {
    let (c, m1, m2) = (0.5, 2.0, 1.0);
    let pp = 1.0 / (1.0 + m1 + m2 * (1.0 - c));
    let m = 41;
    let prof = make_profile(&ProfileKind::GeneralVinberg { c, m1, m2, v: 1.0 }, m).unwrap();
    let total: f64 = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| prof.value(i, j)).sum();
    let x = c * pp;
    let area = x * (1.0 - pp) - m1 * x * x / 2.0;
    assert!((total / (m * m) as f64 - 2.0 * area).abs() < 1e-12);
}

#[test]
fn herglotz_and_residual() {
    let prof = make_profile(&ProfileKind::Trapezoid { p: 0.3, alpha: 1.2, v: 1.0 }, 60).unwrap();
    for z in [C::new(0.0, 0.05), C::new(-2.0, 0.3), C::new(1.0, 3.0)] {
        let f = solve_eta(z, &prof, 1e-11, 20_000).unwrap();
        assert!(f.converged && f.residual <= 1e-11);
        assert!(f.values.iter().all(|e| e.im > 0.0));
        assert!(f.mean().im > 0.0);
        assert!(fixed_point_gap(&f, &prof) < 1e-9, "{z}");
    }
}

#[test]
fn custom_profile() {
    let ones = make_profile(&ProfileKind::Custom(vec![vec![1.0; 3]; 3]), 3).unwrap();
    let s = stieltjes_numeric(C::new(0.0, 2.0), &ones).unwrap();
    assert!((s - C::new(0.0, 2f64.sqrt() - 1.0)).norm() < 1e-10);
    // block profile [[0, v], [v, 0]] on halves: bipartite with square blocks
    let v = 2.0;
    let rows = vec![vec![0.0, v], vec![v, 0.0]];
    let prof = make_profile(&ProfileKind::Custom(rows), 2).unwrap();
    let t = TrapezoidProfile::new(0.5, 0.0, v).unwrap();
    let z = C::new(0.3, 0.9);
    let s = stieltjes_numeric(z, &prof).unwrap();
    assert!((s - stieltjes_s(z, &t).unwrap()).norm() < 1e-8);
}

#[test]
fn make_profile_validation() {
    let bad = [
        ProfileKind::Constant { v: 0.0 },
        ProfileKind::Constant { v: f64::NAN },
        ProfileKind::WignerCorner { c: 1.2, v: 1.0 },
        ProfileKind::Trapezoid { p: 0.4, alpha: 2.0, v: 1.0 },
        ProfileKind::Trapezoid { p: 1.0, alpha: 0.0, v: 1.0 },
        ProfileKind::GeneralVinberg { c: 0.5, m1: 0.0, m2: 0.0, v: 1.0 },
        ProfileKind::GeneralVinberg { c: 0.0, m1: 1.0, m2: 0.0, v: 1.0 },
        ProfileKind::Custom(vec![vec![0.0, 1.0], vec![2.0, 0.0]]),
        ProfileKind::Custom(vec![vec![-1.0, 0.0], vec![0.0, 0.0]]),
    ];
    for k in &bad {
        assert!(matches!(make_profile(k, 2), Err(Error::Parameter(_))), "{k:?}");
    }
    assert!(matches!(make_profile(&ProfileKind::Custom(vec![vec![1.0]]), 2), Err(Error::Dimension(_))));
    assert!(make_profile(&ProfileKind::Constant { v: 1.0 }, 0).is_err());
    assert!(make_profile(&ProfileKind::Trapezoid { p: 0.4, alpha: 1.5, v: 1.0 }, 3).is_ok());
}

#[test]
fn solver_errors() {
    let prof = make_profile(&ProfileKind::Constant { v: 1.0 }, 4).unwrap();
    assert!(matches!(solve_eta(C::new(0.0, 0.5), &prof, 1e-14, 3), Err(Error::Convergence(_))));
    assert!(matches!(solve_eta(C::new(1.0, 0.0), &prof, 1e-10, 100), Err(Error::Domain(_))));
    assert!(matches!(stieltjes_numeric(C::new(1.0, -1.0), &prof), Err(Error::Domain(_))));
    let o = SolverOptions::default();
    assert!(matches!(solve_eta_seeded(C::new(0.0, 1.0), &prof, vec![C::new(0.0, 1.0); 3], &o), Err(Error::Dimension(_))));
    let f = solve_eta_seeded(C::new(0.0, 2.0), &prof, vec![C::new(0.0, 0.4); 4], &o).unwrap();
    assert!((f.mean() - C::new(0.0, 2f64.sqrt() - 1.0)).norm() < 1e-9);
}

#[test]
fn density_recovery() {
    let ladder = [1e-2, 5e-3, 2.5e-3, 1.25e-3];
    for x in [-1.5, 0.0, 0.7, 1.9] {
        let d = density_from_stieltjes(|z| Ok(semicircle(z, 1.0)), x, &ladder).unwrap();
        let exact = (4.0 - x * x).sqrt() / (2.0 * PI);
        assert!((d - exact).abs() < 1e-6, "{x}: {d} {exact}");
    }
    assert_eq!(density_from_stieltjes(|z| Ok(semicircle(z, 1.0)), 3.0, &ladder).unwrap(), 0.0);
    let atom = density_from_stieltjes(|z| Ok(-1.0 / z), 0.0, &ladder);
    assert!(matches!(atom, Err(Error::Domain(_))));
    assert!(matches!(density_from_stieltjes(|z| Ok(-1.0 / z), 0.0, &[1e-2, 1e-3]), Err(Error::Parameter(_))));
    assert!(matches!(density_from_stieltjes(|z| Ok(-1.0 / z), 0.0, &[1e-3, 1e-2, 1e-4]), Err(Error::Parameter(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn prop_random_profile_fixed_point(
        vals in proptest::collection::vec(0.0f64..2.0, 10),
        x in -3.0f64..3.0,
        ly in -1.0f64..1.0,
    ) {
        // symmetric 4 × 4 from the 10 upper-triangular entries
        let mut rows = vec![vec![0.0; 4]; 4];
        let mut k = 0;
        for i in 0..4 {
            for j in i..4 {
                rows[i][j] = vals[k];
                rows[j][i] = vals[k];
                k += 1;
            }
        }
        let prof = make_profile(&ProfileKind::Custom(rows), 4).unwrap();
        let z = C::new(x, 10f64.powf(ly));
        let f = solve_eta(z, &prof, 1e-12, 50_000).unwrap();
        prop_assert!(f.values.iter().all(|e| e.im > 0.0));
        prop_assert!(fixed_point_gap(&f, &prof) < 1e-10);
        // Stieltjes bound |S| ≤ 1/Im z
        prop_assert!(f.mean().norm() <= 1.0 / z.im + 1e-12);
    }
}
