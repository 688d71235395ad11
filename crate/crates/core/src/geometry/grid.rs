use alloc::vec::Vec;

use super::GeometryError;
use crate::vec3::V3;

/// Positions of a surface chart sampled on a uniform rectangular grid.
///
/// Nodes are stored row-major: index `i` runs along `α`, `j` along `β`, and
/// node `(i, j)` is at `i * n_beta + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    alpha: Vec<f64>,
    beta: Vec<f64>,
    positions: Vec<V3>,
    h_alpha: f64,
    h_beta: f64,
}

fn uniform_spacing(p: &[f64]) -> Result<f64, GeometryError> {
    if p.len() < 3 {
        return Err(GeometryError::InvalidGrid("need at least three nodes per direction"));
    }
    let h = (p[p.len() - 1] - p[0]) / (p.len() - 1) as f64;
    if !(h > 0.0 && h.is_finite()) {
        return Err(GeometryError::InvalidGrid("parameters must be strictly increasing"));
    }
    for w in p.windows(2) {
        if !(w[1] > w[0]) || libm::fabs(w[1] - w[0] - h) > 1e-9 * h {
            return Err(GeometryError::InvalidGrid("parameters must be uniformly spaced"));
        }
    }
    Ok(h)
}

impl SurfaceGrid {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>, positions: Vec<V3>) -> Result<Self, GeometryError> {
        let h_alpha = uniform_spacing(&alpha)?;
        let h_beta = uniform_spacing(&beta)?;
        let expected = alpha.len() * beta.len();
        if positions.len() != expected {
            return Err(GeometryError::LengthMismatch { expected, got: positions.len() });
        }
        if let Some(k) = positions.iter().position(|p| !p.iter().all(|x| x.is_finite())) {
            return Err(GeometryError::NonFinite { i: k / beta.len(), j: k % beta.len() });
        }
        Ok(Self { alpha, beta, positions, h_alpha, h_beta })
    }

    /// Samples `f` on `n_alpha × n_beta` nodes spanning the two ranges.
    pub fn from_fn<F>(
        alpha: (f64, f64),
        n_alpha: usize,
        beta: (f64, f64),
        n_beta: usize,
        mut f: F,
    ) -> Result<Self, GeometryError>
    where
        F: FnMut(f64, f64) -> Result<V3, GeometryError>,
    {
        let a = linspace(alpha, n_alpha);
        let b = linspace(beta, n_beta);
        let mut positions = Vec::with_capacity(a.len() * b.len());
        for &x in &a {
            for &y in &b {
                positions.push(f(x, y)?);
            }
        }
        Self::new(a, b, positions)
    }

    pub fn n_alpha(&self) -> usize {
        self.alpha.len()
    }

    pub fn n_beta(&self) -> usize {
        self.beta.len()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn spacing(&self) -> (f64, f64) {
        (self.h_alpha, self.h_beta)
    }

    pub fn positions(&self) -> &[V3] {
        &self.positions
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.beta.len() + j
    }

    pub fn at(&self, i: usize, j: usize) -> V3 {
        self.positions[self.index(i, j)]
    }

    /// Whether `(i, j)` is at least `margin` nodes away from every edge.
    pub fn is_interior(&self, i: usize, j: usize, margin: usize) -> bool {
        i >= margin && j >= margin && i + margin < self.alpha.len() && j + margin < self.beta.len()
    }
}

pub(crate) fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    let (lo, hi) = range;
    (0..n).map(|k| if n > 1 && k == n - 1 { hi } else { lo + (hi - lo) * k as f64 / (n.max(2) - 1) as f64 }).collect()
}
