//! Grids for the surfaces under test.

use super::{GeometryError, SurfaceGrid};
use crate::cone::SphereCurve;
use crate::profile::ProfileCurve;

/// `f(s, y) = (X(s), y, Z(s))` with the profile in arc length, so that the
/// metric is the identity and `H` equals the signed curvature of the profile.
pub fn cylinder_grid(
    curve: &ProfileCurve,
    s_range: (f64, f64),
    n_s: usize,
    y_range: (f64, f64),
    n_y: usize,
) -> Result<SurfaceGrid, GeometryError> {
    let mut last = (f64::NAN, 0.0, 0.0);
    SurfaceGrid::from_fn(s_range, n_s, y_range, n_y, |s, y| {
        if s != last.0 {
            let p = curve.eval(s)?;
            last = (s, p.x, p.z);
        }
        Ok([last.1, y, last.2])
    })
}

/// `f(r, s) = r γ(s)`.
pub fn cone_grid(
    curve: &SphereCurve,
    r_range: (f64, f64),
    n_r: usize,
    s_range: (f64, f64),
    n_s: usize,
) -> Result<SurfaceGrid, GeometryError> {
    if !(r_range.0 > 0.0) {
        return Err(GeometryError::InvalidParameter { name: "r0", value: r_range.0 });
    }
    SurfaceGrid::from_fn(r_range, n_r, s_range, n_s, |r, s| {
        let g = curve.eval(s)?.gamma;
        Ok([r * g[0], r * g[1], r * g[2]])
    })
}

/// `(a sinθ cosφ, b sinθ sinφ, c cosθ)` over a `(θ, φ)` box.
pub fn ellipsoid_grid(
    axes: [f64; 3],
    theta_range: (f64, f64),
    n_theta: usize,
    phi_range: (f64, f64),
    n_phi: usize,
) -> Result<SurfaceGrid, GeometryError> {
    SurfaceGrid::from_fn(theta_range, n_theta, phi_range, n_phi, |t, p| {
        let (st, ct) = (libm::sin(t), libm::cos(t));
        Ok([axes[0] * st * libm::cos(p), axes[1] * st * libm::sin(p), axes[2] * ct])
    })
}
