//! Finite-difference differential geometry on structured parameter grids,
//! used as an independent check of the constructed surfaces, and triangle
//! meshes for export.
//!
//! Curvature convention: `H` is the trace of the shape operator, the sum of
//! the principal curvatures, not their mean, so the unit sphere has
//! `|H| = 2`. The normal is `f_α × f_β` normalized.

mod forms;
mod grid;
mod mesh;
mod residual;
mod surfaces;

use thiserror::Error;

use crate::cone::ConeError;
use crate::profile::ProfileError;

pub use forms::{fundamental_forms, FundamentalForms};
pub use grid::SurfaceGrid;
pub use mesh::{build_cone_mesh, build_cylinder_mesh, Mesh};
pub use residual::{coarse_node_max, fit_slope, max_abs_finite, refinement_study, willmore_residual, RefinementStudy};
pub use surfaces::{cone_grid, cylinder_grid, ellipsoid_grid};

/// Nodes this close to the boundary have no residual: the forms need one
/// neighbour, the gradient of `H` a second and the divergence a third.
pub const RESIDUAL_MARGIN: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("non-finite position at node ({i}, {j})")]
    NonFinite { i: usize, j: usize },
    #[error("field has {got} values, grid has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("parameter {name} = {value} is out of range")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Cone(#[from] ConeError),
}
