//! Search for closed generators: parameters `a` with `T_a = π/m`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::sphere::compute_t_with;
use super::{check_positive, ConeError, DEFAULT_RTOL};
use crate::integrator::find_root;

/// A parameter at which the generator closes after `m` symmetric pieces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedConeCandidate {
    pub m: u32,
    pub a_star: f64,
    pub c_star: f64,
    /// `T_a` at `a_star`, equal to `π/m` up to the root tolerance.
    pub t_star: f64,
    /// Length of the closed curve, `4 m c_star`.
    pub length: f64,
    /// `length − 2π`; positive means the curve is longer than a great circle.
    pub margin_over_2pi: f64,
}

/// `n` points spaced evenly in `log a` over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, ConeError> {
    check_positive("lo", lo)?;
    check_positive("hi", hi)?;
    if hi <= lo || n < 2 {
        return Err(ConeError::InvalidParameter { name: "grid", value: n as f64 });
    }
    let (l0, l1) = (libm::log(lo), libm::log(hi));
    Ok((0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => libm::exp(l0 + (l1 - l0) * i as f64 / (n - 1) as f64),
        })
        .collect())
}

/// `(a, T_a)` for every grid point.
pub fn t_table(grid: &[f64]) -> Result<Vec<(f64, f64)>, ConeError> {
    grid.iter().map(|&a| Ok((a, compute_t_with(a, DEFAULT_RTOL)?))).collect()
}

/// Roots of `T_a − π/m` bracketed by consecutive table entries, refined
/// with Brent's method. All roots are returned.
pub fn closed_cones_from_table(m: u32, table: &[(f64, f64)]) -> Result<Vec<ClosedConeCandidate>, ConeError> {
    if m < 2 {
        return Err(ConeError::InvalidM(m));
    }
    let target = PI / m as f64;
    let mut out = Vec::new();
    for w in table.windows(2) {
        let ((a0, t0), (a1, t1)) = (w[0], w[1]);
        let (f0, f1) = (t0 - target, t1 - target);
        if f1 == 0.0 || (f0 > 0.0) == (f1 > 0.0) && f0 != 0.0 {
            continue;
        }
        let a_star = if f0 == 0.0 {
            a0
        } else {
            find_root(
                |a| compute_t_with(a, DEFAULT_RTOL).map(|t| t - target).unwrap_or(f64::NAN),
                (a0, a1),
                1e-13 * a1,
            )?
        };
        let c_star = super::curvature::compute_c_with(a_star, DEFAULT_RTOL)?;
        let t_star = compute_t_with(a_star, DEFAULT_RTOL)?;
        let length = 4.0 * m as f64 * c_star;
        out.push(ClosedConeCandidate { m, a_star, c_star, t_star, length, margin_over_2pi: length - 2.0 * PI });
    }
    Ok(out)
}

/// Scans `a` over a log grid `(lo, hi, n)` for closed generators with `m` pieces.
pub fn find_closed_cones(m: u32, grid: (f64, f64, usize)) -> Result<Vec<ClosedConeCandidate>, ConeError> {
    if m < 2 {
        return Err(ConeError::InvalidM(m));
    }
    let grid = log_grid(grid.0, grid.1, grid.2)?;
    closed_cones_from_table(m, &t_table(&grid)?)
}
