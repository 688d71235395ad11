//! Shared numerical kernels: adaptive IVP integration, improper quadrature
//! and bracketed root finding.

mod ivp;
mod quad;
mod root;

pub use ivp::{integrate, Event, EventRecord, IvpError, IvpProblem, IvpSolution, TerminalReason, DEFAULT_BLOWUP_GUARD};
pub use quad::{quad_improper, QuadError, SingularEnds, MAX_SUBINTERVALS};
pub use root::{find_root, find_roots_on_grid, RootError};
