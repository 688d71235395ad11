use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::grid::linspace;
use super::GeometryError;
use crate::cone::SphereCurve;
use crate::profile::AssembledProfile;
use crate::vec3::{self, V3};

/// Triangle mesh with optional per-vertex `H` and `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<V3>,
    /// Zero-based vertex indices.
    pub triangles: Vec<[usize; 3]>,
    pub h: Option<Vec<f64>>,
    pub k: Option<Vec<f64>>,
}

impl Mesh {
    /// Triangulates a row-major `rows × cols` lattice of vertices, splitting
    /// each quad along its shorter diagonal.
    pub fn from_lattice(vertices: Vec<V3>, rows: usize, cols: usize) -> Self {
        let mut triangles = Vec::with_capacity(2 * rows.saturating_sub(1) * cols.saturating_sub(1));
        let at = |i: usize, j: usize| i * cols + j;
        for i in 0..rows.saturating_sub(1) {
            for j in 0..cols.saturating_sub(1) {
                let (a, b, c, d) = (at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
                let diag_ac = vec3::norm(vec3::sub(vertices[c], vertices[a]));
                let diag_bd = vec3::norm(vec3::sub(vertices[d], vertices[b]));
                if diag_ac <= diag_bd {
                    triangles.push([a, b, c]);
                    triangles.push([a, c, d]);
                } else {
                    triangles.push([a, b, d]);
                    triangles.push([b, c, d]);
                }
            }
        }
        Self { vertices, triangles, h: None, k: None }
    }

    pub fn triangle_normal(&self, t: usize) -> V3 {
        let [a, b, c] = self.triangles[t];
        let (p, q, r) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        vec3::cross(vec3::sub(q, p), vec3::sub(r, p))
    }

    pub fn min_triangle_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| 0.5 * vec3::norm(self.triangle_normal(t))).fold(f64::INFINITY, f64::min)
    }

    pub fn indices_in_range(&self) -> bool {
        self.triangles.iter().all(|t| t.iter().all(|&i| i < self.vertices.len()))
    }

    /// Wavefront OBJ text: `v` and `f` records, 1-based indices, every
    /// coordinate with 17 significant digits, LF line endings.
    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            let _ = writeln!(s, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2]);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
        s
    }

    /// Sidecar table `index,H,K` keyed by 1-based OBJ vertex index. Missing
    /// fields are written as `NaN`.
    pub fn scalars_csv(&self) -> String {
        let mut s = String::from("index,H,K\n");
        for i in 0..self.vertices.len() {
            let h = self.h.as_ref().map_or(f64::NAN, |v| v[i]);
            let k = self.k.as_ref().map_or(f64::NAN, |v| v[i]);
            let _ = writeln!(s, "{},{:.16e},{:.16e}", i + 1, h, k);
        }
        s
    }
}

/// Extrudes the sampled profile along `y ∈ [0, y_extent]` with `n_y` rows.
/// `H` comes from the profile and `K` is zero.
pub fn build_cylinder_mesh(p: &AssembledProfile, y_extent: f64, n_y: usize) -> Result<Mesh, GeometryError> {
    if !(y_extent > 0.0 && y_extent.is_finite()) {
        return Err(GeometryError::InvalidParameter { name: "y_extent", value: y_extent });
    }
    if n_y < 2 {
        return Err(GeometryError::InvalidParameter { name: "n_y", value: n_y as f64 });
    }
    let ys = linspace((0.0, y_extent), n_y);
    let mut vertices = Vec::with_capacity(p.points.len() * n_y);
    let mut h = Vec::with_capacity(vertices.capacity());
    for q in &p.points {
        for &y in &ys {
            vertices.push([q.x, y, q.z]);
            h.push(q.h);
        }
    }
    let mut mesh = Mesh::from_lattice(vertices, p.points.len(), n_y);
    mesh.k = Some(alloc::vec![0.0; h.len()]);
    mesh.h = Some(h);
    Ok(mesh)
}

/// Vertices `rᵢ γ(sⱼ)` for `n_r` radii in `r_range` and `n_s` uniform
/// parameters over the computed range of the curve. `H = 𝓗(s)/r`, `K = 0`.
pub fn build_cone_mesh(
    curve: &SphereCurve,
    r_range: (f64, f64),
    n_r: usize,
    n_s: usize,
) -> Result<Mesh, GeometryError> {
    let (r0, r1) = r_range;
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(GeometryError::InvalidParameter { name: "r0", value: r0 });
    }
    if !(r1 > r0 && r1.is_finite()) {
        return Err(GeometryError::InvalidParameter { name: "r1", value: r1 });
    }
    if n_r < 2 || n_s < 2 {
        return Err(GeometryError::InvalidParameter { name: "n", value: n_r.min(n_s) as f64 });
    }
    let points =
        linspace((curve.s_min, curve.s_max), n_s).into_iter().map(|s| curve.eval(s)).collect::<Result<Vec<_>, _>>()?;
    let rs = linspace(r_range, n_r);
    let mut vertices = Vec::with_capacity(n_r * n_s);
    let mut h = Vec::with_capacity(n_r * n_s);
    for &r in &rs {
        for p in &points {
            vertices.push(vec3::scale(p.gamma, r));
            h.push(p.h / r);
        }
    }
    let mut mesh = Mesh::from_lattice(vertices, n_r, n_s);
    mesh.k = Some(alloc::vec![0.0; h.len()]);
    mesh.h = Some(h);
    Ok(mesh)
}
