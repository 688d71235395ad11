use alloc::vec;
use alloc::vec::Vec;

use super::{fundamental_forms, GeometryError, SurfaceGrid, RESIDUAL_MARGIN};

/// Pointwise `Δ_g H + ½(H² − 4K)H` on the grid.
///
/// The Laplace–Beltrami operator is taken in divergence form,
/// `(1/√g) ∂ᵢ(√g gⁱʲ ∂ⱼH)`, with the metric from [`fundamental_forms`] and
/// central differences for both derivatives. Nodes without a full stencil
/// (within [`RESIDUAL_MARGIN`] of an edge, or next to a NaN input) are NaN.
pub fn willmore_residual(grid: &SurfaceGrid, h: &[f64], k: &[f64]) -> Result<Vec<f64>, GeometryError> {
    let len = grid.len();
    for field in [h, k] {
        if field.len() != len {
            return Err(GeometryError::LengthMismatch { expected: len, got: field.len() });
        }
    }
    let forms = fundamental_forms(grid);
    let (ha, hb) = grid.spacing();
    let (na, nb) = (grid.n_alpha(), grid.n_beta());
    let nan = f64::NAN;
    let mut sqrt_g = vec![nan; len];
    let mut flux_a = vec![nan; len];
    let mut flux_b = vec![nan; len];
    for i in 1..na - 1 {
        for j in 1..nb - 1 {
            let idx = grid.index(i, j);
            let (e, f, g) = (forms.e[idx], forms.f[idx], forms.g[idx]);
            let det = e * g - f * f;
            if !(det > 0.0) {
                continue;
            }
            let dh_a = (h[grid.index(i + 1, j)] - h[grid.index(i - 1, j)]) / (2.0 * ha);
            let dh_b = (h[grid.index(i, j + 1)] - h[grid.index(i, j - 1)]) / (2.0 * hb);
            let sg = libm::sqrt(det);
            sqrt_g[idx] = sg;
            // √g gⁱʲ ∂ⱼH with g⁻¹ = [G, −F; −F, E]/det
            flux_a[idx] = (g * dh_a - f * dh_b) / sg;
            flux_b[idx] = (e * dh_b - f * dh_a) / sg;
        }
    }
    let mut out = vec![nan; len];
    for i in RESIDUAL_MARGIN..na.saturating_sub(RESIDUAL_MARGIN) {
        for j in RESIDUAL_MARGIN..nb.saturating_sub(RESIDUAL_MARGIN) {
            let idx = grid.index(i, j);
            let div = (flux_a[grid.index(i + 1, j)] - flux_a[grid.index(i - 1, j)]) / (2.0 * ha)
                + (flux_b[grid.index(i, j + 1)] - flux_b[grid.index(i, j - 1)]) / (2.0 * hb);
            let hv = h[idx];
            out[idx] = div / sqrt_g[idx] + 0.5 * (hv * hv - 4.0 * k[idx]) * hv;
        }
    }
    Ok(out)
}

/// Largest `|v|` over the finite entries, or NaN if there are none.
pub fn max_abs_finite(values: &[f64]) -> f64 {
    values.iter().filter(|v| v.is_finite()).map(|v| libm::fabs(*v)).fold(f64::NAN, f64::max)
}

/// Largest `|v|` over the nodes of a grid refined `stride` times that
/// coincide with coarse nodes at least `margin` coarse steps inside.
///
/// `values` is row-major on the fine grid with `n_beta` columns; `coarse` is
/// the coarse node count `(n_alpha, n_beta)`.
pub fn coarse_node_max(values: &[f64], n_beta: usize, stride: usize, coarse: (usize, usize), margin: usize) -> f64 {
    let mut worst = f64::NAN;
    for ci in margin..coarse.0.saturating_sub(margin) {
        for cj in margin..coarse.1.saturating_sub(margin) {
            let v = values[ci * stride * n_beta + cj * stride];
            if v.is_finite() {
                worst = worst.max(libm::fabs(v));
            }
        }
    }
    worst
}

/// Least-squares slope of `log v` against `log h`.
pub fn fit_slope(h: &[f64], v: &[f64]) -> f64 {
    let n = h.len().min(v.len()) as f64;
    let xs: Vec<f64> = h.iter().map(|x| libm::log(*x)).collect();
    let ys: Vec<f64> = v.iter().map(|x| libm::log(*x)).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Maximum residual at successive grid halvings, compared on common nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementStudy {
    pub spacing: Vec<f64>,
    pub max_residual: Vec<f64>,
    /// `log₂` of successive ratios of `max_residual`.
    pub pairwise_slopes: Vec<f64>,
    pub fitted_slope: f64,
}

/// Runs `make_grid(level)` for `levels` levels, where level `k` must have
/// `2^k (n − 1) + 1` nodes per direction over the same parameter box as
/// level 0, and compares the residual with finite-difference `H` and `K` on
/// the level-0 interior nodes.
pub fn refinement_study<F>(levels: usize, mut make_grid: F) -> Result<RefinementStudy, GeometryError>
where
    F: FnMut(usize) -> Result<SurfaceGrid, GeometryError>,
{
    let mut spacing = Vec::new();
    let mut max_residual = Vec::new();
    let mut coarse = (0, 0);
    for level in 0..levels {
        let grid = make_grid(level)?;
        let stride = 1usize << level;
        if level == 0 {
            coarse = (grid.n_alpha(), grid.n_beta());
        } else if grid.n_alpha() != (coarse.0 - 1) * stride + 1 || grid.n_beta() != (coarse.1 - 1) * stride + 1 {
            return Err(GeometryError::InvalidGrid("refined grid does not nest the coarse grid"));
        }
        let forms = fundamental_forms(&grid);
        let r = willmore_residual(&grid, &forms.h, &forms.k)?;
        spacing.push(grid.spacing().0);
        max_residual.push(coarse_node_max(&r, grid.n_beta(), stride, coarse, RESIDUAL_MARGIN));
    }
    let pairwise_slopes = max_residual.windows(2).map(|w| libm::log2(w[0] / w[1])).collect();
    let fitted_slope = fit_slope(&spacing, &max_residual);
    Ok(RefinementStudy { spacing, max_residual, pairwise_slopes, fitted_slope })
}
