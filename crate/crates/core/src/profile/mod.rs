//! The planar profile of the flat Willmore cylinder: the fundamental branch
//! `u(x)` on `[0, ρ)`, the second branch in the rotated chart, and the
//! periodic curve glued from copies of both.

mod assemble;
mod branch;

use thiserror::Error;

use crate::integrator::{IvpError, QuadError};

pub use assemble::{
    assemble_profile, gauss_map_extent, normal_angle_extent, sample_curve, willmore_energy_per_cell, ArcKind,
    AssembledProfile, CurvePoint, Junction, JunctionKind, PlacedArc, ProfileCurve, RigidMotion, ASSEMBLY_RTOL,
    JUNCTION_TOL,
};
pub use branch::{
    branch_endpoints, grad_h_squared, mean_curvature, mean_curvature_closed_form, solve_branch, solve_second_branch,
    BranchSample, BranchState, ProfileSolution, SecondBranch,
};

/// Default integration tolerance for the branch IVPs.
pub const DEFAULT_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("the constant C must be positive and finite, got {0}")]
    InvalidConstant(f64),
    #[error("tolerance must lie in (0, 1e-2), got {0}")]
    InvalidTolerance(f64),
    #[error("number of periods must be at least 1, got {0}")]
    InvalidPeriods(usize),
    #[error("sampling step must be positive, got {0}")]
    InvalidStep(f64),
    #[error("argument {x} outside [{lo}, {hi}]")]
    OutOfRange { x: f64, lo: f64, hi: f64 },
    #[error("integration reached {reached} without blow-up")]
    NoBlowUp { reached: f64 },
    #[error("quarter arc {kind:?} did not reach its end condition")]
    ArcDidNotClose { kind: ArcKind },
    #[error("quarter arc {kind:?} ends {error} away from the quadrature endpoint")]
    EndpointMismatch { kind: ArcKind, error: f64 },
    #[error("tangent jumps by {jump} after arc {arc}")]
    TangentMismatch { arc: usize, jump: f64 },
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Ivp(#[from] IvpError),
}
