use std::f64::consts::PI;

use willmore_core::cone::{compute_c, solve_sphere_curve};
use willmore_core::geometry::*;
use willmore_core::profile::{assemble_profile, ProfileCurve};

fn interior_max(grid: &SurfaceGrid, margin: usize, f: impl Fn(usize) -> f64) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..grid.n_alpha() {
        for j in 0..grid.n_beta() {
            if grid.is_interior(i, j, margin) {
                worst = worst.max(f(grid.index(i, j)).abs());
            }
        }
    }
    worst
}

#[test]
fn plane_has_no_curvature_and_no_residual() {
    let g = SurfaceGrid::from_fn((0.0, 1.0), 21, (-1.0, 1.0), 31, |u, v| Ok([u, v, 0.3 * u - 0.2 * v + 1.0])).unwrap();
    let f = fundamental_forms(&g);
    assert!(interior_max(&g, 1, |k| f.h[k]) < 1e-12);
    assert!(interior_max(&g, 1, |k| f.k[k]) < 1e-12);
    let r = willmore_residual(&g, &f.h, &f.k).unwrap();
    assert!(max_abs_finite(&r) < 1e-10);
}

#[test]
fn sphere_curvatures_converge_at_second_order() {
    let mut errs = Vec::new();
    let mut hs = Vec::new();
    for n in [21usize, 41, 81] {
        let g = ellipsoid_grid([1.0; 3], (0.5, 2.5), n, (0.0, 2.0), n).unwrap();
        let f = fundamental_forms(&g);
        let e = interior_max(&g, 1, |k| (f.k[k] - 1.0).abs().max((f.h[k].abs() - 2.0).abs()));
        errs.push(e);
        hs.push(g.spacing().0);
    }
    assert!(errs[2] < 1e-3);
    let slope = fit_slope(&hs, &errs);
    assert!((slope - 2.0).abs() < 0.2, "slope {slope}");
}

#[test]
fn round_sphere_is_willmore_and_ellipsoid_is_not() {
    let g = ellipsoid_grid([1.0; 3], (0.4, 2.7), 81, (0.0, 6.0), 161).unwrap();
    let f = fundamental_forms(&g);
    assert!(max_abs_finite(&willmore_residual(&g, &f.h, &f.k).unwrap()) < 1e-6);
    let g = ellipsoid_grid([2.0, 1.0, 1.0], (0.4, 2.7), 161, (0.0, 6.0), 321).unwrap();
    let f = fundamental_forms(&g);
    assert!(max_abs_finite(&willmore_residual(&g, &f.h, &f.k).unwrap()) > 0.1);
}

#[test]
fn cone_grid_forms() {
    let a = 1.3;
    let curve = solve_sphere_curve(a, (-2.0, 2.0), 1e-12).unwrap();
    let g = cone_grid(&curve, (1.0, 2.0), 41, (-1.5, 1.5), 241).unwrap();
    let f = fundamental_forms(&g);
    let (_, hs) = g.spacing();
    for i in 1..g.n_alpha() - 1 {
        let r = g.alpha()[i];
        for j in 1..g.n_beta() - 1 {
            let k = g.index(i, j);
            assert!((f.e[k] - 1.0).abs() < 1e-10);
            // γ·γ' = 0 exactly, the central difference of γ is off by O(h²)
            assert!(f.f[k].abs() < r * hs * hs);
            assert!((f.g[k] - r * r).abs() < r * r * hs * hs);
            assert!(f.l[k].abs() < 1e-8);
            assert!(f.m[k].abs() < 1e-8);
            assert!(f.k[k].abs() <= 1e-6);
            let h_exact = curve.eval(g.beta()[j]).unwrap().h / r;
            assert!((f.h[k].abs() - h_exact.abs()).abs() < 1e-3);
        }
    }
}

#[test]
fn cylinder_curvature_matches_profile_at_second_order() {
    let curve = ProfileCurve::new(1.0, 1, 1e-13).unwrap();
    let mut hs = Vec::new();
    let mut errs = Vec::new();
    let mut kmax = Vec::new();
    for level in 0..3 {
        let n = 60 * (1 << level) + 1;
        let g = cylinder_grid(&curve, (0.5, 6.5), n, (0.0, 0.4), 4 * (1 << level) + 1).unwrap();
        let f = fundamental_forms(&g);
        let stride = 1 << level;
        let mut worst: f64 = 0.0;
        let mut kw: f64 = 0.0;
        for ci in 1..60 {
            let i = ci * stride;
            let k = g.index(i, g.n_beta() / 2);
            let exact = curve.eval(g.alpha()[i]).unwrap().h;
            worst = worst.max((f.h[k] - exact).abs());
            kw = kw.max(f.k[k].abs());
        }
        hs.push(g.spacing().0);
        errs.push(worst);
        kmax.push(kw);
    }
    let slope = fit_slope(&hs, &errs);
    assert!((slope - 2.0).abs() < 0.2, "slope {slope} errors {errs:?}");
    assert!(kmax.iter().all(|k| *k < 1e-8), "{kmax:?}");
}

#[test]
fn residual_refinement_on_both_families() {
    for c in [0.25, 1.0, 4.0] {
        let curve = ProfileCurve::new(c, 1, 1e-13).unwrap();
        let n0 = ((curve.total_length() - 0.2) / 0.1).floor() as usize;
        let st = refinement_study(3, |k| {
            cylinder_grid(&curve, (0.1, 0.1 + 0.1 * n0 as f64), n0 * (1 << k) + 1, (0.0, 0.8), 8 * (1 << k) + 1)
        })
        .unwrap();
        assert!((st.fitted_slope - 2.0).abs() <= 0.2, "C = {c}: {st:?}");
        assert!(st.max_residual.windows(2).all(|w| w[1] < w[0]));
    }
    for a in [0.5, 1.0, 2.0] {
        let curve = solve_sphere_curve(a, (-3.0, 3.0), 1e-12).unwrap();
        let st =
            refinement_study(3, |k| cone_grid(&curve, (1.0, 2.0), 10 * (1 << k) + 1, (-2.5, 2.5), 50 * (1 << k) + 1))
                .unwrap();
        assert!((st.fitted_slope - 2.0).abs() <= 0.2, "a = {a}: {st:?}");
        assert!(st.max_residual.windows(2).all(|w| w[1] < w[0]));
    }
}

#[test]
fn refinement_study_rejects_non_nested_grids() {
    let r = refinement_study(2, |k| ellipsoid_grid([1.0; 3], (0.5, 2.5), 21 + k, (0.0, 2.0), 21));
    assert!(matches!(r, Err(GeometryError::InvalidGrid(_))));
}

#[test]
fn grid_validation() {
    assert!(matches!(
        SurfaceGrid::new(vec![0.0, 1.0], vec![0.0, 1.0, 2.0], vec![[0.0; 3]; 6]),
        Err(GeometryError::InvalidGrid(_))
    ));
    assert!(matches!(
        SurfaceGrid::new(vec![0.0, 1.0, 3.0], vec![0.0, 1.0, 2.0], vec![[0.0; 3]; 9]),
        Err(GeometryError::InvalidGrid(_))
    ));
    assert!(matches!(
        SurfaceGrid::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 2.0], vec![[0.0; 3]; 8]),
        Err(GeometryError::LengthMismatch { expected: 9, got: 8 })
    ));
    let mut p = vec![[0.0; 3]; 9];
    p[4][1] = f64::NAN;
    assert!(matches!(
        SurfaceGrid::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 2.0], p),
        Err(GeometryError::NonFinite { i: 1, j: 1 })
    ));
    let g = SurfaceGrid::from_fn((0.0, 1.0), 5, (0.0, 1.0), 5, |u, v| Ok([u, v, 0.0])).unwrap();
    assert!(matches!(willmore_residual(&g, &[0.0; 3], &[0.0; 25]), Err(GeometryError::LengthMismatch { .. })));
}

#[test]
fn degenerate_metric_is_flagged() {
    // every row collapses onto the same line
    let g = SurfaceGrid::from_fn((0.0, 1.0), 5, (0.0, 1.0), 5, |u, _| Ok([u, 0.0, 0.0])).unwrap();
    let f = fundamental_forms(&g);
    assert!(f.degenerate[g.index(2, 2)]);
    assert!(f.h[g.index(2, 2)].is_nan());
}

#[test]
fn cylinder_mesh() {
    let p = assemble_profile(1.0, 1, 0.02).unwrap();
    let m = build_cylinder_mesh(&p, 1.0, 5).unwrap();
    assert_eq!(m.vertices.len(), p.points.len() * 5);
    assert_eq!(m.triangles.len(), 2 * (p.points.len() - 1) * 4);
    assert!(m.indices_in_range());
    assert!(m.min_triangle_area() > 0.0);
    assert!(m.k.as_ref().unwrap().iter().all(|k| *k == 0.0));
    for t in 0..m.triangles.len() {
        let n = m.triangle_normal(t);
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        assert!(n[1].abs() <= 1e-6 * len);
    }
    assert!(build_cylinder_mesh(&p, 0.0, 5).is_err());
    assert!(build_cylinder_mesh(&p, 1.0, 1).is_err());
}

#[test]
fn cone_mesh() {
    let a = 1.0;
    let c = compute_c(a).unwrap();
    let curve = solve_sphere_curve(a, (-c, c), 1e-12).unwrap();
    let (n_r, n_s) = (6, 40);
    let m = build_cone_mesh(&curve, (0.5, 2.0), n_r, n_s).unwrap();
    assert_eq!(m.vertices.len(), n_r * n_s);
    assert!(m.indices_in_range());
    assert!(m.min_triangle_area() > 0.0);
    let h = m.h.as_ref().unwrap();
    for j in 0..n_s {
        let v0 = m.vertices[j];
        let r0 = (v0[0] * v0[0] + v0[1] * v0[1] + v0[2] * v0[2]).sqrt();
        for i in 1..n_r {
            let v = m.vertices[i * n_s + j];
            let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            // straight radial line through the apex
            for d in 0..3 {
                assert!((v[d] * r0 - v0[d] * r).abs() < 1e-12);
            }
            assert!((h[i * n_s + j] * r - h[j] * r0).abs() < 1e-12);
        }
    }
    assert!(build_cone_mesh(&curve, (0.0, 1.0), 4, 4).is_err());
    assert!(build_cone_mesh(&curve, (-1.0, 1.0), 4, 4).is_err());
}

#[test]
fn obj_and_sidecar_format() {
    let g: Vec<[f64; 3]> = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, PI]];
    let mut m = Mesh::from_lattice(g, 2, 2);
    m.h = Some(vec![0.1, 0.2, 0.3, 0.4]);
    let obj = m.to_obj();
    assert!(!obj.contains('\r'));
    let lines: Vec<&str> = obj.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[3], "v 1.0000000000000000e0 1.0000000000000000e0 3.1415926535897931e0");
    assert!(lines[4].starts_with("f ") && lines[5].starts_with("f "));
    for l in &lines[..4] {
        for x in l.split(' ').skip(1) {
            let v: f64 = x.parse().unwrap();
            assert_eq!(format!("{v:.16e}"), x);
        }
    }
    let csv = m.scalars_csv();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "index,H,K");
    assert_eq!(rows[1], "1,1.0000000000000001e-1,NaN");
}
