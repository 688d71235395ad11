use alloc::vec;
use alloc::vec::Vec;

use super::SurfaceGrid;
use crate::vec3::{self, V3};

/// First and second fundamental forms with `H` and `K`, per node.
///
/// Boundary nodes have no central-difference stencil; their entries are NaN.
/// Nodes where `EG − F² ≤ 0` are flagged in `degenerate` and also left NaN
/// for `H`, `K` and the second form.
#[derive(Debug, Clone)]
pub struct FundamentalForms {
    pub e: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub l: Vec<f64>,
    pub m: Vec<f64>,
    pub n: Vec<f64>,
    pub normal: Vec<V3>,
    /// `(LG − 2MF + NE)/(EG − F²)`
    pub h: Vec<f64>,
    /// `(LN − M²)/(EG − F²)`
    pub k: Vec<f64>,
    pub degenerate: Vec<bool>,
}

pub fn fundamental_forms(grid: &SurfaceGrid) -> FundamentalForms {
    let len = grid.len();
    let nan = f64::NAN;
    let mut out = FundamentalForms {
        e: vec![nan; len],
        f: vec![nan; len],
        g: vec![nan; len],
        l: vec![nan; len],
        m: vec![nan; len],
        n: vec![nan; len],
        normal: vec![[nan; 3]; len],
        h: vec![nan; len],
        k: vec![nan; len],
        degenerate: vec![false; len],
    };
    let (ha, hb) = grid.spacing();
    for i in 1..grid.n_alpha() - 1 {
        for j in 1..grid.n_beta() - 1 {
            let p = grid.at(i, j);
            let (pa, ma) = (grid.at(i + 1, j), grid.at(i - 1, j));
            let (pb, mb) = (grid.at(i, j + 1), grid.at(i, j - 1));
            let fa = vec3::scale(vec3::sub(pa, ma), 0.5 / ha);
            let fb = vec3::scale(vec3::sub(pb, mb), 0.5 / hb);
            let faa = vec3::scale(vec3::add(vec3::sub(pa, vec3::scale(p, 2.0)), ma), 1.0 / (ha * ha));
            let fbb = vec3::scale(vec3::add(vec3::sub(pb, vec3::scale(p, 2.0)), mb), 1.0 / (hb * hb));
            let cross_diff = vec3::sub(
                vec3::add(grid.at(i + 1, j + 1), grid.at(i - 1, j - 1)),
                vec3::add(grid.at(i + 1, j - 1), grid.at(i - 1, j + 1)),
            );
            let fab = vec3::scale(cross_diff, 0.25 / (ha * hb));
            let idx = grid.index(i, j);
            let (e, f, g) = (vec3::dot(fa, fa), vec3::dot(fa, fb), vec3::dot(fb, fb));
            out.e[idx] = e;
            out.f[idx] = f;
            out.g[idx] = g;
            let det = e * g - f * f;
            if !(det > 0.0) {
                out.degenerate[idx] = true;
                continue;
            }
            let nrm = vec3::normalize(vec3::cross(fa, fb));
            let (l, m, n) = (vec3::dot(faa, nrm), vec3::dot(fab, nrm), vec3::dot(fbb, nrm));
            out.normal[idx] = nrm;
            out.l[idx] = l;
            out.m[idx] = m;
            out.n[idx] = n;
            out.h[idx] = (l * g - 2.0 * m * f + n * e) / det;
            out.k[idx] = (l * n - m * m) / det;
        }
    }
    out
}
