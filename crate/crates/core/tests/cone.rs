use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use statrs::function::beta::beta;
use willmore_core::cone::*;

/// `α = B(1/4, 1/2)/2`, the first zero of `Ψ'' = −Ψ³/2`, `Ψ(0) = 1`.
fn alpha_oracle() -> f64 {
    beta(0.25, 0.5) / 2.0
}

/// `c_a` from the energy integral, `𝓗 = a cos φ`-type substitution:
/// `c_a = ∫₀^{π/2} dφ / √(1 + a²(1 + sin²φ)/4)`, by composite Simpson.
fn c_oracle(a: f64) -> f64 {
    let n = 4000;
    let h = FRAC_PI_2 / n as f64;
    let f = |p: f64| 1.0 / (1.0 + a * a * (1.0 + p.sin().powi(2)) / 4.0).sqrt();
    let mut s = f(0.0) + f(FRAC_PI_2);
    for k in 1..n {
        s += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn epsilon_for(a: f64) -> f64 {
    // positive root of 2ε² + 4ε − a² = 0
    -1.0 + (1.0 + a * a / 2.0).sqrt()
}

#[test]
fn solve_curvature_examples() {
    let s = solve_curvature(1.0, 20.0, 1e-12).unwrap();
    assert_eq!(s.energy, 1.25);
    for p in s.samples() {
        let e = p.dh * p.dh + p.h * p.h + p.h.powi(4) / 4.0;
        assert!((e - 1.25).abs() < 1e-10 * 1.25);
    }
    let s = solve_curvature(2.0, 20.0, 1e-12).unwrap();
    let at_c = s.eval(s.c_a).unwrap();
    assert!(at_c.h.abs() < 1e-12);
    assert!((at_c.dh + 2.0 * 2f64.sqrt()).abs() < 1e-8);
    assert!((s.eval(2.0 * s.c_a).unwrap().h + 2.0).abs() < 1e-8);
    assert_eq!(s.period, 4.0 * s.c_a);
}

#[test]
fn compute_c_examples() {
    let eps = epsilon_for(0.01);
    let c = compute_c(0.01).unwrap();
    assert!(c >= PI / (2.0 * (1.0 + eps)) && c <= FRAC_PI_2);
    let c100 = compute_c(100.0).unwrap();
    assert!(c100 < 0.1);
    assert!((100.0 * c100 - alpha_oracle()).abs() <= 1e-2);
}

#[test]
fn c_bounds_for_small_a() {
    for eps in [0.01f64, 0.05, 0.1] {
        let a_max = (2.0 * eps * eps + 4.0 * eps).sqrt();
        for k in 1..20 {
            let a = a_max * k as f64 / 20.0;
            let c = compute_c(a).unwrap();
            assert!(c >= PI / (2.0 * (1.0 + eps)), "a = {a}, c = {c}");
            assert!(c <= FRAC_PI_2);
        }
    }
}

#[test]
fn invalid_parameters_rejected() {
    assert!(matches!(compute_c(0.0), Err(ConeError::InvalidParameter { .. })));
    assert!(matches!(compute_c(-1.0), Err(ConeError::InvalidParameter { .. })));
    assert!(matches!(solve_curvature(f64::NAN, 10.0, 1e-10), Err(ConeError::InvalidParameter { .. })));
    assert!(matches!(find_closed_cones(1, (0.1, 10.0, 20)), Err(ConeError::InvalidM(1))));
    assert!(matches!(find_closed_cones(0, (0.1, 10.0, 20)), Err(ConeError::InvalidM(0))));
    assert!(matches!(cone_surface_fields(1.0, 0.0, 0.0), Err(ConeError::InvalidParameter { .. })));
    assert!(matches!(cone_surface_fields(1.0, -2.0, 0.0), Err(ConeError::InvalidParameter { .. })));
    assert!(matches!(cone_willmore_residual(1.0, 0.0, 0.3), Err(ConeError::InvalidParameter { .. })));
    assert!(log_grid(1.0, 0.5, 10).is_err());
}

#[test]
fn limit_profile() {
    let lp = solve_limit_profile(1e-12).unwrap();
    assert_eq!(lp.eval(0.0).unwrap(), (1.0, 0.0));
    assert!((lp.alpha - alpha_oracle()).abs() < 1e-10);
    let q = alpha_by_quadrature(1e-12).unwrap();
    assert!((lp.alpha - q).abs() < 1e-8);
    for (_, psi, dpsi) in lp.samples() {
        assert!((dpsi * dpsi - (1.0 - psi.powi(4)) / 4.0).abs() < 1e-10);
    }
    let (a, _) = lp.eval(lp.alpha / 2.0).unwrap();
    let (b, _) = lp.eval(1.5 * lp.alpha).unwrap();
    assert!(a > 0.0);
    assert!((a + b).abs() < 1e-10);
}

#[test]
fn t_limits_and_continuity() {
    let t0 = compute_t(1e-3).unwrap();
    assert!(t0 > PI - 0.05 && t0 < PI);
    assert!(compute_t(100.0).unwrap() < 0.1);
    let grid = log_grid(0.01, 50.0, 300).unwrap();
    let table = t_table(&grid).unwrap();
    for w in table.windows(2) {
        assert!((w[1].1 - w[0].1).abs() < 0.05, "jump at a = {}", w[0].0);
    }
}

#[test]
fn great_circle_limit() {
    let c = compute_c(1e-3).unwrap();
    let curve = solve_sphere_curve(1e-3, (-4.0 * c, 4.0 * c), 1e-12).unwrap();
    assert!(curve.great_circle_deviation() <= 1e-2);
    let m = closing_arc_length(1e-9, 2.0 * PI + 1.0, 1e-3, 1e-6).unwrap();
    assert!((m.s_close - 2.0 * PI).abs() < 1e-6);
    assert!((m.chord_length - 2.0 * PI).abs() < 1e-5);
}

#[test]
fn closed_cones_on_default_grid() {
    // reference roots from an independent solve with a different integrator
    let reference = [(2, 1.24902), (3, 2.12995), (4, 2.94262)];
    for (m, a_ref) in reference {
        let found = find_closed_cones(m, (1e-3, 1e2, 400)).unwrap();
        assert!(!found.is_empty());
        assert!(found.iter().any(|x| (x.a_star - a_ref).abs() < 1e-4));
        for x in &found {
            assert!((2.0 * m as f64 * x.t_star - 2.0 * PI).abs() < 1e-9);
            assert!(x.length > 2.0 * PI && x.margin_over_2pi > 0.0);
            assert_eq!(x.length, 4.0 * m as f64 * x.c_star);
            let oracle = closing_arc_length(x.a_star, 2.0 * PI * m as f64 + 1.0, 1e-3, 1e-6).unwrap();
            assert!((oracle.chord_length - x.length).abs() < 1e-4, "{} vs {}", oracle.chord_length, x.length);
        }
    }
}

#[test]
fn table_reuse_matches_direct_search() {
    let grid = log_grid(0.5, 5.0, 40).unwrap();
    let table = t_table(&grid).unwrap();
    let from_table = closed_cones_from_table(3, &table).unwrap();
    let direct = find_closed_cones(3, (0.5, 5.0, 40)).unwrap();
    assert_eq!(from_table, direct);
}

#[test]
fn surface_fields() {
    assert_eq!(cone_surface_fields(1.0, 2.0, 0.0).unwrap(), (0.5, 0.0));
    let (h1, k1) = cone_surface_fields(1.7, 1.0, 0.4).unwrap();
    let (h3, k3) = cone_surface_fields(1.7, 3.0, 0.4).unwrap();
    assert_eq!((k1, k3), (0.0, 0.0));
    assert!((h1 - 3.0 * h3).abs() < 1e-14);
    // wrong curvature: cos s at s = 0
    assert_eq!(cone_residual_from(1.0, -1.0, 1.0), 0.5);
    let (c, c2) = (0.3f64.cos(), -0.3f64.cos());
    assert!((cone_residual_from(c, c2, 1.0) - 8.0 * cone_residual_from(c, c2, 2.0)).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn energy_and_period(a in 0.05f64..20.0) {
        let c = compute_c(a).unwrap();
        let s = solve_curvature(a, 40.0 * c + 0.1, 1e-12).unwrap();
        prop_assert!(s.energy_drift <= 1e-10);
        prop_assert!((s.c_a - c).abs() < 1e-12);
        let e = (a * a + a.powi(4) / 4.0).sqrt();
        prop_assert!((s.eval(c).unwrap().dh + e).abs() <= 1e-8 * e.max(1.0));
        for k in 0..100 {
            let x = 4.0 * c * k as f64 / 100.0;
            let d = s.eval(x).unwrap().h - s.eval(x + 4.0 * c).unwrap().h;
            prop_assert!(d.abs() <= 1e-8 * a.max(1.0));
        }
    }

    #[test]
    fn c_matches_energy_integral(a in 0.01f64..50.0) {
        let c = compute_c(a).unwrap();
        prop_assert!(c > 0.0 && c <= FRAC_PI_2);
        prop_assert!((c - c_oracle(a)).abs() < 1e-9, "{} vs {}", c, c_oracle(a));
    }

    #[test]
    fn zero_based_solution_is_symmetric(a in 0.05f64..10.0) {
        let c = compute_c(a).unwrap();
        let e = (a * a + a.powi(4) / 4.0).sqrt();
        let sol = solve_curvature_from(0.0, -e, 2.0 * c + 0.1, 1e-12).unwrap();
        for k in 0..=50 {
            let x = 2.0 * c * k as f64 / 50.0;
            let l = sol.dense_eval(x).unwrap()[0];
            let r = sol.dense_eval((2.0 * c - x).max(0.0)).unwrap()[0];
            prop_assert!((l - r).abs() <= 1e-9 * a.max(1.0));
        }
        // the first zero after s = 0 sits at 2 c_a
        let z = sol.events.iter().map(|e| e.t).find(|&t| t > 1e-9).unwrap();
        prop_assert!((z - 2.0 * c).abs() < 1e-9);
    }

    #[test]
    fn sphere_curve_invariants(a in 0.05f64..8.0) {
        let c = compute_c(a).unwrap();
        let curve = solve_sphere_curve(a, (-4.0 * c, 4.0 * c), 1e-12).unwrap();
        prop_assert!(curve.constraint_drift <= 1e-8);
        let ss: Vec<f64> = (0..=200).map(|k| (-4.0 * c + 8.0 * c * k as f64 / 200.0).min(4.0 * c)).collect();
        for &s in &ss {
            let p = curve.eval(s).unwrap();
            prop_assert!((curve.intrinsic_curvature(s).unwrap() - p.h).abs() <= 1e-6);
        }
        let half: Vec<f64> = (0..=100).map(|k| 2.0 * c * k as f64 / 100.0).collect();
        prop_assert!(curve.symmetry1_defect(&half).unwrap() <= 1e-6);
        prop_assert!(curve.symmetry2_defect(&half).unwrap() <= 1e-6);
        let g = curve.eval_frame2(c).unwrap().gamma;
        prop_assert!((g[0] - 1.0).abs() < 1e-10 && g[1].abs() < 1e-14 && g[2].abs() < 1e-14);
    }

    #[test]
    fn residual_vanishes_on_solution(a in 0.1f64..8.0, r in 0.1f64..10.0, s in 0.0f64..6.0) {
        let res = cone_willmore_residual(a, r, s).unwrap();
        prop_assert!(res.abs() <= 1e-8 / r.powi(3));
        let h = curvature_at(a, s).unwrap();
        let (hr, k) = cone_surface_fields(a, r, s).unwrap();
        prop_assert_eq!(k, 0.0);
        prop_assert!((hr * r - h).abs() <= 1e-12 * (1.0 + h.abs()));
    }

    #[test]
    fn residual_small_relative_to_cubic_term(a in 8.0f64..50.0, s in 0.0f64..3.0) {
        let res = cone_willmore_residual(a, 1.0, s).unwrap();
        prop_assert!(res.abs() <= 1e-10 * a.powi(3), "{} at a = {}", res, a);
    }
}
