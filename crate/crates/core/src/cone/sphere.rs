//! The generating curve `γ_a` on the unit sphere.
//!
//! The curve solves `γ'' = −|γ'|²γ + 𝓗_a (γ × γ')`, the ambient form of
//! `∇γ'γ' = 𝓗 J(γ')`, together with the curvature equation, as one
//! 8-dimensional system. After every step `γ` is projected back to the
//! sphere and `γ'` to the unit tangent plane; the largest correction is
//! reported as the constraint drift.
//!
//! Coordinates: `γ(0)` lies in the xz-plane, `γ'(0)` is along `y`, and the
//! frame is then turned about `y` so that `γ(c_a)` has zero z-component.
//! The second frame of the symmetry argument is a further turn about `z`
//! taking `γ(c_a)` to `(1, 0, 0)`.

use alloc::vec;
use alloc::vec::Vec;

use super::curvature::compute_c_with;
use super::{check_positive, ConeError, DRIFT_TOL};
use crate::integrator::{find_root, integrate, IvpProblem, IvpSolution};
use crate::vec3::{self, V3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub s: f64,
    pub gamma: V3,
    pub dgamma: V3,
    /// `𝓗_a(s)` carried along in the same integration.
    pub h: f64,
}

#[derive(Debug, Clone)]
pub struct SphereCurve {
    pub a: f64,
    pub c_a: f64,
    pub s_min: f64,
    pub s_max: f64,
    /// Largest constraint correction over all steps, before projection.
    pub constraint_drift: f64,
    /// Turn about `y` applied to the raw solution.
    pub frame_angle: f64,
    /// Further turn about `z` giving the second frame.
    pub frame2_angle: f64,
    forward: IvpSolution,
    backward: Option<IvpSolution>,
}

fn sphere_problem(a: f64) -> Result<IvpProblem<'static>, ConeError> {
    let y0 = vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, a, 0.0];
    Ok(IvpProblem::new(0.0, y0, |_, y, out| {
        let g = [y[0], y[1], y[2]];
        let dg = [y[3], y[4], y[5]];
        let h = y[6];
        let n = vec3::cross(g, dg);
        let v2 = vec3::dot(dg, dg);
        for i in 0..3 {
            out[i] = dg[i];
            out[3 + i] = -v2 * g[i] + h * n[i];
        }
        out[6] = y[7];
        out[7] = -h * (1.0 + 0.5 * h * h);
    })?
    .with_projection(|y| {
        let g = [y[0], y[1], y[2]];
        let dg = [y[3], y[4], y[5]];
        let r = vec3::norm(g);
        let drift = libm::fabs(1.0 - r).max(libm::fabs(vec3::dot(g, dg))).max(libm::fabs(1.0 - vec3::norm(dg)));
        let g = vec3::scale(g, 1.0 / r);
        let t = vec3::sub(dg, vec3::scale(g, vec3::dot(g, dg)));
        let t = vec3::normalize(t);
        y[..3].copy_from_slice(&g);
        y[3..6].copy_from_slice(&t);
        drift
    }))
}

/// Integrates `γ_a` over `[s_min, s_max]` (which must contain 0).
pub fn solve_sphere_curve(a: f64, s_range: (f64, f64), rtol: f64) -> Result<SphereCurve, ConeError> {
    check_positive("a", a)?;
    check_positive("rtol", rtol)?;
    let (s_min, s_max) = s_range;
    if !(s_min.is_finite() && s_max.is_finite() && s_min <= 0.0 && s_max >= 0.0 && s_max > s_min) {
        return Err(ConeError::InvalidParameter { name: "s_range", value: s_min });
    }
    let c_a = compute_c_with(a, rtol)?;
    let problem = sphere_problem(a)?;
    let atol = rtol * 1e-2;
    let forward = integrate(&problem, s_max.max(c_a), rtol, atol)?;
    let backward = if s_min < 0.0 { Some(integrate(&problem, s_min, rtol, atol)?) } else { None };
    let mut drift = forward.max_projection;
    if let Some(b) = &backward {
        drift = drift.max(b.max_projection);
    }
    if drift > DRIFT_TOL {
        return Err(ConeError::ConstraintDrift { drift, tol: DRIFT_TOL });
    }
    let gc = forward.dense_eval(c_a).expect("c_a covered");
    let frame_angle = libm::atan2(gc[2], gc[0]);
    let g1 = vec3::rotate_axis([gc[0], gc[1], gc[2]], 1, frame_angle);
    let frame2_angle = -libm::atan2(g1[1], g1[0]);
    Ok(SphereCurve { a, c_a, s_min, s_max, constraint_drift: drift, frame_angle, frame2_angle, forward, backward })
}

impl SphereCurve {
    fn raw(&self, s: f64) -> Option<(Vec<f64>, &IvpSolution)> {
        if s < self.s_min || s > self.s_max.max(self.c_a) {
            return None;
        }
        let sol = if s >= 0.0 { &self.forward } else { self.backward.as_ref()? };
        sol.dense_eval(s).map(|y| (y, sol))
    }

    fn to_frame(&self, v: V3) -> V3 {
        vec3::rotate_axis(v, 1, self.frame_angle)
    }

    fn out_of_range(&self, s: f64) -> ConeError {
        ConeError::OutOfRange { s, lo: self.s_min, hi: self.s_max }
    }

    /// Point of the curve in the first frame.
    pub fn eval(&self, s: f64) -> Result<SpherePoint, ConeError> {
        let (y, _) = self.raw(s).ok_or_else(|| self.out_of_range(s))?;
        Ok(SpherePoint {
            s,
            gamma: self.to_frame([y[0], y[1], y[2]]),
            dgamma: self.to_frame([y[3], y[4], y[5]]),
            h: y[6],
        })
    }

    /// Point of the curve in the second frame, where `γ(c_a) = (1, 0, 0)`.
    pub fn eval_frame2(&self, s: f64) -> Result<SpherePoint, ConeError> {
        let p = self.eval(s)?;
        Ok(SpherePoint {
            gamma: vec3::rotate_axis(p.gamma, 2, self.frame2_angle),
            dgamma: vec3::rotate_axis(p.dgamma, 2, self.frame2_angle),
            ..p
        })
    }

    /// `γ''` from differentiating the interpolant of `γ'`.
    pub fn second_derivative(&self, s: f64) -> Result<V3, ConeError> {
        let (_, sol) = self.raw(s).ok_or_else(|| self.out_of_range(s))?;
        let d = sol.dense_derivative(s).ok_or_else(|| self.out_of_range(s))?;
        Ok(self.to_frame([d[3], d[4], d[5]]))
    }

    /// `γ''·(γ × γ')` recomputed from the trajectory.
    pub fn intrinsic_curvature(&self, s: f64) -> Result<f64, ConeError> {
        let p = self.eval(s)?;
        let dd = self.second_derivative(s)?;
        Ok(vec3::dot(dd, vec3::cross(p.gamma, p.dgamma)))
    }

    /// Accepted integration points over `[s_min, s_max]`, in increasing `s`.
    pub fn samples(&self) -> Vec<SpherePoint> {
        let mut ss: Vec<f64> = Vec::new();
        if let Some(b) = &self.backward {
            ss.extend(b.times().iter().rev().copied().filter(|&s| s < 0.0));
        }
        ss.extend(self.forward.times().iter().copied().filter(|&s| s <= self.s_max));
        ss.into_iter().filter_map(|s| self.eval(s).ok()).collect()
    }

    /// Points at uniform spacing `n` intervals over `[lo, hi]`.
    pub fn uniform(&self, lo: f64, hi: f64, n: usize) -> Result<Vec<SpherePoint>, ConeError> {
        (0..=n).map(|i| self.eval(lo + (hi - lo) * i as f64 / n as f64)).collect()
    }

    /// `max |(X(−s), −Y(−s), Z(−s)) − γ(s)|` over the given `s` values.
    pub fn symmetry1_defect(&self, s_values: &[f64]) -> Result<f64, ConeError> {
        let mut worst: f64 = 0.0;
        for &s in s_values {
            let p = self.eval(s)?.gamma;
            let q = self.eval(-s)?.gamma;
            worst = worst.max(vec3::norm(vec3::sub([q[0], -q[1], q[2]], p)));
        }
        Ok(worst)
    }

    /// `max |(X(2c−s), −Y(2c−s), −Z(2c−s)) − γ(s)|` in the second frame.
    pub fn symmetry2_defect(&self, s_values: &[f64]) -> Result<f64, ConeError> {
        let mut worst: f64 = 0.0;
        for &s in s_values {
            let p = self.eval_frame2(s)?.gamma;
            let q = self.eval_frame2(2.0 * self.c_a - s)?.gamma;
            worst = worst.max(vec3::norm(vec3::sub([q[0], -q[1], -q[2]], p)));
        }
        Ok(worst)
    }

    /// Largest distance of sampled points from the best-fit great circle.
    pub fn great_circle_deviation(&self) -> f64 {
        let pts = self.samples();
        let mut m = [[0.0; 3]; 3];
        for p in &pts {
            for i in 0..3 {
                for j in 0..3 {
                    m[i][j] += p.gamma[i] * p.gamma[j];
                }
            }
        }
        let n = smallest_eigenvector(m);
        pts.iter().map(|p| libm::fabs(vec3::dot(n, p.gamma))).fold(0.0, f64::max)
    }
}

/// Unit eigenvector of the smallest eigenvalue of a symmetric 3×3 matrix
/// (cyclic Jacobi rotations).
fn smallest_eigenvector(mut a: [[f64; 3]; 3]) -> V3 {
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _ in 0..50 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off < 1e-30 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if libm::fabs(a[p][q]) < 1e-300 {
                continue;
            }
            let theta = 0.5 * libm::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
            let (s, c) = (libm::sin(theta), libm::cos(theta));
            for k in 0..3 {
                let (akp, akq) = (a[k][p], a[k][q]);
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let (apk, aqk) = (a[p][k], a[q][k]);
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for row in v.iter_mut() {
                let (vp, vq) = (row[p], row[q]);
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }
    let k = (0..3).min_by(|&i, &j| a[i][i].total_cmp(&a[j][j])).unwrap_or(0);
    vec3::normalize([v[0][k], v[1][k], v[2][k]])
}

/// `T_a`: spherical distance between `γ_a(−c_a)` and `γ_a(c_a)`.
pub fn compute_t(a: f64) -> Result<f64, ConeError> {
    compute_t_with(a, super::DEFAULT_RTOL)
}

pub(crate) fn compute_t_with(a: f64, rtol: f64) -> Result<f64, ConeError> {
    let c = compute_c_with(a, rtol)?;
    let curve = solve_sphere_curve(a, (-c, c), rtol)?;
    let p = curve.eval(-c)?.gamma;
    let q = curve.eval(c)?.gamma;
    Ok(libm::acos(vec3::dot(p, q).clamp(-1.0, 1.0)))
}

/// Closure of the curve found without reference to `c_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosureMeasurement {
    /// Parameter value where `γ` first returns to `γ(0)` with the same tangent.
    pub s_close: f64,
    /// Sum of chord lengths of the sampled curve over `[0, s_close]`.
    pub chord_length: f64,
    /// `|γ(s_close) − γ(0)|`
    pub gap: f64,
}

/// Walks along `γ_a` from `s = 0` and reports the first return to the
/// starting point and direction, together with the polygonal length of the
/// closed curve sampled at spacing `step`.
pub fn closing_arc_length(a: f64, s_limit: f64, step: f64, tol: f64) -> Result<ClosureMeasurement, ConeError> {
    check_positive("s_limit", s_limit)?;
    check_positive("step", step)?;
    let curve = solve_sphere_curve(a, (0.0, s_limit), super::DEFAULT_RTOL)?;
    let p0 = curve.eval(0.0)?;
    let dist2 = |s: f64| -> f64 {
        let p = curve.eval(s).map(|p| p.gamma).unwrap_or([f64::NAN; 3]);
        let d = vec3::sub(p, p0.gamma);
        vec3::dot(d, d)
    };
    // derivative of |γ(s) − γ(0)|², negative before and positive after a return
    let slope = |s: f64| -> f64 {
        curve.eval(s).map(|p| 2.0 * vec3::dot(vec3::sub(p.gamma, p0.gamma), p.dgamma)).unwrap_or(f64::NAN)
    };
    let n = libm::ceil(s_limit / step) as usize;
    let h = s_limit / n as f64;
    let mut s_close = None;
    for i in 1..n {
        let (s0, s1) = (h * i as f64, h * (i + 1) as f64);
        let (d0, d1) = (slope(s0), slope(s1));
        if d0 < 0.0 && d1 >= 0.0 {
            let s = find_root(&slope, (s0, s1), 1e-14)?;
            let p = curve.eval(s)?;
            let tangent_gap = vec3::norm(vec3::sub(p.dgamma, p0.dgamma));
            if libm::sqrt(dist2(s)) < tol && tangent_gap < tol {
                s_close = Some(s);
                break;
            }
        }
    }
    let s_close = s_close.ok_or(ConeError::NoClosure(s_limit))?;
    let m = libm::ceil(s_close / step) as usize;
    let mut length = 0.0;
    let mut prev = p0.gamma;
    for i in 1..=m {
        let q = curve.eval(s_close * i as f64 / m as f64)?.gamma;
        length += vec3::norm(vec3::sub(q, prev));
        prev = q;
    }
    Ok(ClosureMeasurement { s_close, chord_length: length, gap: libm::sqrt(dist2(s_close)) })
}
