//! Curvature of the cone `f(r, s) = r γ_a(s)` and its Willmore residual.
//!
//! On the cone the mean curvature is `𝓗_a(s)/r` and the Gauss curvature
//! vanishes. With `𝓗'' = −𝓗(1 + 𝓗²/2)` the residual
//! `(𝓗 + 𝓗'' + 𝓗³/2)/r³` is zero.

use super::curvature::solve_curvature_from;
use super::{check_positive, ConeError, DEFAULT_RTOL};

/// Tolerance of the integration behind [`cone_willmore_residual`].
pub const RESIDUAL_RTOL: f64 = 1e-14;

/// `𝓗_a(s)` from a fresh integration started at `s = 0`.
pub fn curvature_at(a: f64, s: f64) -> Result<f64, ConeError> {
    check_positive("a", a)?;
    if !s.is_finite() {
        return Err(ConeError::InvalidParameter { name: "s", value: s });
    }
    if s == 0.0 {
        return Ok(a);
    }
    let sol = solve_curvature_from(a, 0.0, s, DEFAULT_RTOL)?;
    Ok(sol.y_last()[0])
}

/// `(H, K)` of the cone at `(r, s)`.
pub fn cone_surface_fields(a: f64, r: f64, s: f64) -> Result<(f64, f64), ConeError> {
    check_positive("r", r)?;
    Ok((curvature_at(a, s)? / r, 0.0))
}

/// The residual assembled from `𝓗`, `𝓗''` and `r`.
pub fn cone_residual_from(h: f64, h2: f64, r: f64) -> f64 {
    (h + h2 + 0.5 * h * h * h) / (r * r * r)
}

/// The Willmore residual at `(r, s)`, with `𝓗''` taken from the dense
/// output of the integration rather than from the equation.
///
/// The interpolated `𝓗''` is accurate to about `1e-11 a³`, so for large `a`
/// the residual is small relative to `𝓗³` rather than in absolute terms.
pub fn cone_willmore_residual(a: f64, r: f64, s: f64) -> Result<f64, ConeError> {
    check_positive("r", r)?;
    check_positive("a", a)?;
    // integrate past s so that it is not a step point
    let end = if s < 0.0 { s - 1.0 } else { s + 1.0 };
    let sol = solve_curvature_from(a, 0.0, end, RESIDUAL_RTOL)?;
    let y = sol.dense_eval(s).ok_or(ConeError::OutOfRange { s, lo: 0.0, hi: end })?;
    let d = sol.dense_derivative(s).ok_or(ConeError::OutOfRange { s, lo: 0.0, hi: end })?;
    Ok(cone_residual_from(y[0], d[1], r))
}
