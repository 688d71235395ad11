//! Gluing branch copies into the periodic planar profile.
//!
//! Each glued piece is a quarter arc: the half `x ∈ [0, ρ]` of the first
//! branch, where the tangent angle runs from 0 to π/2, or the half
//! `x̃ ∈ [0, ξ]` of the second branch, where it runs from 0 to π/2 in the
//! rotated chart. The other halves of both branches coincide with these
//! after the chart change, so four quarter arcs make one period.
//!
//! Arcs are integrated in arc length with state `(x, z, θ, κ)`:
//! `θ' = κ` and `κ' = C cos θ` on the first branch, `κ' = −C sin θ` on the
//! second. Along the first branch `κ = w'/(1+w²)^{3/2}` and `θ = arctan w`,
//! so this is the same curve, parametrized so that the vertical tangent at
//! `x = ρ` is an ordinary point.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use super::branch::{branch_endpoints, ProfileSolution};
use super::ProfileError;
use crate::integrator::{integrate, quad_improper, IvpProblem, IvpSolution, SingularEnds, TerminalReason};

/// Integration tolerance for the quarter arcs.
pub const ASSEMBLY_RTOL: f64 = 1e-12;
/// Largest accepted tangent or endpoint mismatch at a junction.
pub const JUNCTION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    /// Half of the first branch, from the inflection point to the vertical tangent.
    First,
    /// Half of the second branch, from the curvature maximum to the vertical tangent.
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JunctionKind {
    /// Chart boundary at an inflection point, `H = 0`.
    HZero,
    /// Chart boundary at a curvature maximum, `|H| = √(2C)`.
    HMax,
}

/// A quarter arc in its own chart.
#[derive(Debug, Clone)]
struct QuarterArc {
    length: f64,
    sol: IvpSolution,
}

impl QuarterArc {
    fn solve(c: f64, kind: ArcKind, rtol: f64) -> Result<Self, ProfileError> {
        let (k0, bound) = match kind {
            ArcKind::First => (0.0, 10.0 / libm::sqrt(c)),
            ArcKind::Second => (libm::sqrt(2.0 * c), 10.0 / libm::sqrt(c)),
        };
        let base = IvpProblem::new(0.0, vec![0.0, 0.0, 0.0, k0], move |_, y, out| {
            out[0] = libm::cos(y[2]);
            out[1] = libm::sin(y[2]);
            out[2] = y[3];
            out[3] = match kind {
                ArcKind::First => c * libm::cos(y[2]),
                ArcKind::Second => -c * libm::sin(y[2]),
            };
        })?;
        let problem = match kind {
            ArcKind::First => base.with_event(|_, y| libm::cos(y[2]), true),
            ArcKind::Second => base.with_event(|_, y| y[3], true),
        };
        let sol = integrate(&problem, bound, rtol, rtol * 1e-3)?;
        if sol.terminal_reason != TerminalReason::EventHit(0) {
            return Err(ProfileError::ArcDidNotClose { kind });
        }
        Ok(Self { length: sol.t_last(), sol })
    }

    fn at(&self, s: f64) -> [f64; 4] {
        let s = s.clamp(0.0, self.length);
        let y = self.sol.dense_eval(s).expect("inside arc");
        [y[0], y[1], y[2], y[3]]
    }
}

/// Placement of one quarter arc in the global xz-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacedArc {
    pub kind: ArcKind,
    /// Global position of the chart origin.
    pub origin: [f64; 2],
    /// Global direction of the chart's x-axis.
    pub phi: f64,
    /// +1 if the chart is orientation preserving, −1 if reflected.
    pub parity: f64,
    /// Global arc length at the start of the arc.
    pub s_start: f64,
    pub length: f64,
}

/// A point of the profile with its tangent angle, signed curvature and
/// squared curvature gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub s: f64,
    pub x: f64,
    pub z: f64,
    pub theta: f64,
    pub h: f64,
    pub grad_h2: f64,
}

/// Mismatch data for one chart boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Junction {
    /// Index of the arc that ends at this junction.
    pub arc: usize,
    pub kind: JunctionKind,
    pub tangent_jump: f64,
    pub h_left: f64,
    pub h_right: f64,
}

/// Continuous evaluator of the glued profile over a number of periods.
#[derive(Debug, Clone)]
pub struct ProfileCurve {
    pub c: f64,
    pub periods: usize,
    pub rho: f64,
    pub xi: f64,
    pub arcs: Vec<PlacedArc>,
    pub junctions: Vec<Junction>,
    first: QuarterArc,
    second: QuarterArc,
}

/// Chart layout of one period: kind, direction of the chart x-axis, parity.
const CELL_LAYOUT: [(ArcKind, f64, f64); 4] = [
    (ArcKind::First, 0.0, 1.0),
    (ArcKind::Second, FRAC_PI_2, 1.0),
    (ArcKind::First, PI, -1.0),
    (ArcKind::Second, FRAC_PI_2, -1.0),
];

fn rot(phi: f64, p: [f64; 2]) -> [f64; 2] {
    let (s, c) = (libm::sin(phi), libm::cos(phi));
    [c * p[0] - s * p[1], s * p[0] + c * p[1]]
}

impl ProfileCurve {
    pub fn new(c: f64, periods: usize, rtol: f64) -> Result<Self, ProfileError> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(ProfileError::InvalidConstant(c));
        }
        if periods == 0 {
            return Err(ProfileError::InvalidPeriods(periods));
        }
        let (rho, xi) = branch_endpoints(c, rtol.max(1e-12))?;
        let first = QuarterArc::solve(c, ArcKind::First, rtol)?;
        let second = QuarterArc::solve(c, ArcKind::Second, rtol)?;

        // chart endpoints must reproduce the branch extents from quadrature
        let e1 = first.at(first.length);
        let e2 = second.at(second.length);
        for (kind, got, want) in
            [(ArcKind::First, [e1[0], e1[1]], [rho, xi]), (ArcKind::Second, [e2[0], e2[1]], [xi, rho])]
        {
            let err = libm::hypot(got[0] - want[0], got[1] - want[1]);
            if err > JUNCTION_TOL {
                return Err(ProfileError::EndpointMismatch { kind, error: err });
            }
        }

        let mut curve = Self { c, periods, rho, xi, arcs: Vec::new(), junctions: Vec::new(), first, second };
        let mut origin = [0.0, 0.0];
        let mut s_start = 0.0;
        for _ in 0..periods {
            for &(kind, phi, parity) in CELL_LAYOUT.iter() {
                let length = curve.quarter(kind).length;
                let arc = PlacedArc { kind, origin, phi, parity, s_start, length };
                let end = curve.arc_point(&arc, length);
                curve.arcs.push(arc);
                origin = [end.x, end.z];
                s_start += length;
            }
        }
        for i in 0..curve.arcs.len().saturating_sub(1) {
            let (a, b) = (curve.arcs[i], curve.arcs[i + 1]);
            let left = curve.arc_point(&a, a.length);
            let right = curve.arc_point(&b, 0.0);
            let jump = libm::fabs(libm::remainder(left.theta - right.theta, 2.0 * PI));
            if jump > JUNCTION_TOL {
                return Err(ProfileError::TangentMismatch { arc: i, jump });
            }
            let kind = match a.kind {
                ArcKind::First => JunctionKind::HMax,
                ArcKind::Second => JunctionKind::HZero,
            };
            curve.junctions.push(Junction { arc: i, kind, tangent_jump: jump, h_left: left.h, h_right: right.h });
        }
        Ok(curve)
    }

    fn quarter(&self, kind: ArcKind) -> &QuarterArc {
        match kind {
            ArcKind::First => &self.first,
            ArcKind::Second => &self.second,
        }
    }

    fn arc_point(&self, arc: &PlacedArc, local_s: f64) -> CurvePoint {
        let [x, z, th, k] = self.quarter(arc.kind).at(local_s);
        let d = rot(arc.phi, [x, arc.parity * z]);
        let grad = match arc.kind {
            ArcKind::First => self.c * libm::cos(th),
            ArcKind::Second => self.c * libm::sin(th),
        };
        CurvePoint {
            s: arc.s_start + local_s,
            x: arc.origin[0] + d[0],
            z: arc.origin[1] + d[1],
            theta: arc.phi + arc.parity * th,
            h: arc.parity * k,
            grad_h2: grad * grad,
        }
    }

    /// Length of one period.
    pub fn cell_length(&self) -> f64 {
        2.0 * (self.first.length + self.second.length)
    }

    pub fn total_length(&self) -> f64 {
        self.cell_length() * self.periods as f64
    }

    /// Lengths of the two quarter-arc types.
    pub fn quarter_lengths(&self) -> (f64, f64) {
        (self.first.length, self.second.length)
    }

    /// Point at global arc length `s ∈ [0, total_length]`.
    pub fn eval(&self, s: f64) -> Result<CurvePoint, ProfileError> {
        let total = self.arcs.last().map(|a| a.s_start + a.length).unwrap_or(0.0);
        if !(s >= 0.0 && s <= total) {
            return Err(ProfileError::OutOfRange { x: s, lo: 0.0, hi: total });
        }
        let idx = self.arcs.partition_point(|a| a.s_start <= s).saturating_sub(1);
        let arc = self.arcs[idx];
        Ok(self.arc_point(&arc, s - arc.s_start))
    }

    /// Points where each period starts, including the end of the last one.
    pub fn cell_starts(&self) -> Vec<CurvePoint> {
        let mut out: Vec<CurvePoint> = self.arcs.iter().step_by(4).map(|a| self.arc_point(a, 0.0)).collect();
        if let Some(last) = self.arcs.last() {
            out.push(self.arc_point(last, last.length));
        }
        out
    }
}

/// The glued profile sampled at bounded arc-length spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct AssembledProfile {
    pub c: f64,
    pub period_cells: usize,
    pub points: Vec<CurvePoint>,
    pub junctions: Vec<Junction>,
    /// Index into `points` of each chart boundary, aligned with `junctions`.
    pub junction_points: Vec<usize>,
    /// Index into `points` where each period starts; has `period_cells + 1` entries.
    pub cell_start_points: Vec<usize>,
    pub step: f64,
}

/// Rigid motion of the plane: rotation by `angle`, then translation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidMotion {
    pub angle: f64,
    pub translation: [f64; 2],
}

pub fn assemble_profile(c: f64, periods: usize, step: f64) -> Result<AssembledProfile, ProfileError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(ProfileError::InvalidStep(step));
    }
    let curve = ProfileCurve::new(c, periods, ASSEMBLY_RTOL)?;
    Ok(sample_curve(&curve, step))
}

/// Samples every arc uniformly in arc length with spacing at most `step`.
pub fn sample_curve(curve: &ProfileCurve, step: f64) -> AssembledProfile {
    let mut points = Vec::new();
    let mut arc_starts = Vec::with_capacity(curve.arcs.len());
    for (i, arc) in curve.arcs.iter().enumerate() {
        arc_starts.push(points.len().saturating_sub(1));
        let n = libm::ceil(arc.length / step).max(1.0) as usize;
        let first = if i == 0 { 0 } else { 1 };
        for j in first..=n {
            points.push(curve.arc_point(arc, arc.length * j as f64 / n as f64));
        }
    }
    let junction_points: Vec<usize> = arc_starts[1..].to_vec();
    let mut cell_start_points: Vec<usize> = arc_starts.iter().step_by(4).copied().collect();
    cell_start_points.push(points.len() - 1);
    AssembledProfile {
        c: curve.c,
        period_cells: curve.periods,
        points,
        junctions: curve.junctions.clone(),
        junction_points,
        cell_start_points,
        step,
    }
}

impl AssembledProfile {
    /// Motion carrying the start frame of cell `k` to that of cell `k + 1`.
    pub fn cell_motions(&self) -> Vec<RigidMotion> {
        self.cell_start_points
            .windows(2)
            .map(|w| {
                let (a, b) = (self.points[w[0]], self.points[w[1]]);
                RigidMotion { angle: libm::remainder(b.theta - a.theta, 2.0 * PI), translation: [b.x - a.x, b.z - a.z] }
            })
            .collect()
    }

    /// Largest difference between the motions of consecutive cell pairs.
    pub fn cell_motion_spread(&self) -> f64 {
        let m = self.cell_motions();
        m.windows(2)
            .map(|w| {
                libm::fabs(w[1].angle - w[0].angle)
                    .max(libm::fabs(w[1].translation[0] - w[0].translation[0]))
                    .max(libm::fabs(w[1].translation[1] - w[0].translation[1]))
            })
            .fold(0.0, f64::max)
    }

    /// Points of cell `k`, both end points included.
    pub fn cell(&self, k: usize) -> &[CurvePoint] {
        &self.points[self.cell_start_points[k]..=self.cell_start_points[k + 1]]
    }

    /// Number of properly crossing pairs of non-adjacent segments in cell `k`.
    pub fn self_intersections(&self, k: usize) -> usize {
        count_crossings(self.cell(k))
    }

    pub fn max_spacing(&self) -> f64 {
        self.points.windows(2).map(|w| w[1].s - w[0].s).fold(0.0, f64::max)
    }
}

fn count_crossings(pts: &[CurvePoint]) -> usize {
    let n = pts.len();
    if n < 4 {
        return 0;
    }
    let seg = |i: usize| ([pts[i].x, pts[i].z], [pts[i + 1].x, pts[i + 1].z]);
    let mut count = 0;
    for i in 0..n - 1 {
        let (a0, a1) = seg(i);
        for j in i + 2..n - 1 {
            let (b0, b1) = seg(j);
            if a0[0].max(a1[0]) < b0[0].min(b1[0])
                || b0[0].max(b1[0]) < a0[0].min(a1[0])
                || a0[1].max(a1[1]) < b0[1].min(b1[1])
                || b0[1].max(b1[1]) < a0[1].min(a1[1])
            {
                continue;
            }
            if segments_cross(a0, a1, b0, b1) {
                count += 1;
            }
        }
    }
    count
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn segments_cross(a0: [f64; 2], a1: [f64; 2], b0: [f64; 2], b1: [f64; 2]) -> bool {
    let d1 = orient(b0, b1, a0);
    let d2 = orient(b0, b1, a1);
    let d3 = orient(a0, a1, b0);
    let d4 = orient(a0, a1, b1);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Angular diameter of the set of unit normals along the profile.
///
/// The normal at tangent angle θ points at θ + π/2; the extent is 2π minus
/// the widest empty arc of the circle.
pub fn gauss_map_extent(p: &AssembledProfile) -> f64 {
    normal_angle_extent(p.points.iter().map(|q| q.theta + FRAC_PI_2))
}

pub fn normal_angle_extent(angles: impl Iterator<Item = f64>) -> f64 {
    let tau = 2.0 * PI;
    let mut a: Vec<f64> = angles.map(|t| t - tau * libm::floor(t / tau)).collect();
    if a.is_empty() {
        return 0.0;
    }
    a.sort_by(f64::total_cmp);
    let mut gap = a[0] + tau - a[a.len() - 1];
    for w in a.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    (tau - gap).max(0.0)
}

/// `(1/4)∫H² ds` over one period, per unit length along the rulings.
///
/// A period consists of two halves of each branch. Both contributions are
/// integrated in `w`: `H²√(1+w²) dx = √(2C)√w (1+w²)^{-5/4} dw` on the first
/// branch and `√(2C)(1+w̃²)^{-5/4} dw̃` on the second.
pub fn willmore_energy_per_cell(sol: &ProfileSolution) -> Result<f64, ProfileError> {
    let k = libm::sqrt(2.0 * sol.c);
    let tol = (sol.rtol * 1e-2).max(1e-14);
    let e1 = quad_improper(
        |w| k * libm::sqrt(w) / libm::pow(1.0 + w * w, 1.25),
        0.0,
        f64::INFINITY,
        SingularEnds::LOWER,
        tol,
    )?;
    let e2 = quad_improper(|w| k / libm::pow(1.0 + w * w, 1.25), 0.0, f64::INFINITY, SingularEnds::NONE, tol)?;
    Ok(0.25 * (2.0 * e1 + 2.0 * e2))
}
