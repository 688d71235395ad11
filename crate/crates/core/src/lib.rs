#![no_std]
//! Numerical construction of Willmore-type surfaces: the cylinder profile
//! with prescribed mean-curvature gradient, and cones over closed spherical
//! curves, together with the ODE, quadrature and differential-geometry
//! kernels they share.

extern crate alloc;

pub mod cone;
pub mod geometry;
pub mod integrator;
pub mod profile;
pub mod vec3;
