//! Willmore cones over spherical curves: the curvature equation
//! `𝓗'' = −𝓗(1 + 𝓗²/2)`, the generating curve on the unit sphere, the
//! closure angle `T_a`, and the search for closed generators.

mod closed;
mod curvature;
mod sphere;
mod surface;

use thiserror::Error;

use crate::integrator::{IvpError, QuadError, RootError};

pub use closed::{closed_cones_from_table, find_closed_cones, log_grid, t_table, ClosedConeCandidate};
pub use curvature::{
    alpha_by_quadrature, compute_c, solve_curvature, solve_curvature_from, solve_limit_profile, ConeGeneratorSolution,
    CurvatureSample, LimitProfile,
};
pub use sphere::{closing_arc_length, compute_t, solve_sphere_curve, ClosureMeasurement, SphereCurve, SpherePoint};
pub use surface::{cone_residual_from, cone_surface_fields, cone_willmore_residual, curvature_at, RESIDUAL_RTOL};

/// Default tolerance for the cone integrations.
pub const DEFAULT_RTOL: f64 = 1e-12;
/// Largest accepted constraint correction on the sphere curve.
pub const DRIFT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConeError {
    #[error("parameter {name} = {value} is out of range")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("m = {0} is not allowed; closed generators need m >= 2")]
    InvalidM(u32),
    #[error("no zero of the curvature found for a = {a} on (0, {searched}]")]
    ZeroNotFound { a: f64, searched: f64 },
    #[error("sphere constraint drift {drift} exceeds {tol}")]
    ConstraintDrift { drift: f64, tol: f64 },
    #[error("s = {s} outside the computed range [{lo}, {hi}]")]
    OutOfRange { s: f64, lo: f64, hi: f64 },
    #[error("curve does not close within s = {0}")]
    NoClosure(f64),
    #[error(transparent)]
    Ivp(#[from] IvpError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Root(#[from] RootError),
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<(), ConeError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ConeError::InvalidParameter { name, value })
    }
}
