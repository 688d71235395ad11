//! The verification suite: numbered criteria, each a list of checks of a
//! measured value against a tolerance.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::value::RawValue;
use willmore_core::cone::{
    alpha_by_quadrature, closed_cones_from_table, closing_arc_length, compute_c, compute_t, solve_curvature,
    solve_limit_profile, solve_sphere_curve,
};
use willmore_core::geometry::{
    cone_grid, cylinder_grid, ellipsoid_grid, fundamental_forms, max_abs_finite, refinement_study, willmore_residual,
};
use willmore_core::profile::{
    assemble_profile, branch_endpoints, gauss_map_extent, grad_h_squared, mean_curvature, mean_curvature_closed_form,
    solve_branch, JunctionKind, ProfileCurve,
};

use crate::config::Suite;
use crate::output::json_f64;
use crate::CliError;

pub const SCHEMA: &str = "willmore-verify/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Above,
    #[serde(rename = ">=")]
    AtLeast,
}

impl Comparison {
    fn holds(self, measured: f64, tolerance: f64) -> bool {
        match self {
            Comparison::AtMost => measured <= tolerance,
            Comparison::Below => measured < tolerance,
            Comparison::Above => measured > tolerance,
            Comparison::AtLeast => measured >= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub criterion: u32,
    pub name: String,
    pub anchor: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl Check {
    /// A NaN measurement never passes.
    pub fn new(
        criterion: u32,
        name: impl Into<String>,
        anchor: &'static str,
        measured: f64,
        comparison: Comparison,
        tolerance: f64,
    ) -> Self {
        let pass = comparison.holds(measured, tolerance);
        Check { criterion, name: name.into(), anchor, measured, tolerance, comparison, pass }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub tolerance: f64,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    /// Criteria in order, each with whether all of its checks passed.
    pub fn criteria(&self) -> Vec<(u32, bool)> {
        let mut out: Vec<(u32, bool)> = Vec::new();
        for c in &self.checks {
            match out.last_mut() {
                Some((n, ok)) if *n == c.criterion => *ok &= c.pass,
                _ => out.push((c.criterion, c.pass)),
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct JsonCheck<'a> {
            criterion: u32,
            name: &'a str,
            anchor: &'a str,
            measured: Box<RawValue>,
            tolerance: Box<RawValue>,
            comparison: Comparison,
            pass: bool,
        }
        #[derive(Serialize)]
        struct JsonReport<'a> {
            schema: &'a str,
            suite: &'a str,
            tolerance: Box<RawValue>,
            checks: Vec<JsonCheck<'a>>,
            passed: usize,
            failed: usize,
            status: &'a str,
        }
        let suite = match self.suite {
            Suite::All => "all",
            Suite::Profile => "profile",
            Suite::Cone => "cone",
            Suite::Geometry => "geometry",
        };
        let report = JsonReport {
            schema: SCHEMA,
            suite,
            tolerance: json_f64(self.tolerance),
            checks: self
                .checks
                .iter()
                .map(|c| JsonCheck {
                    criterion: c.criterion,
                    name: &c.name,
                    anchor: c.anchor,
                    measured: json_f64(c.measured),
                    tolerance: json_f64(c.tolerance),
                    comparison: c.comparison,
                    pass: c.pass,
                })
                .collect(),
            passed: self.checks.len() - self.failed(),
            failed: self.failed(),
            status: if self.passed() { "pass" } else { "fail" },
        };
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    }
}

type Criterion = fn(f64) -> Result<Vec<Check>, CliError>;

/// Criteria 1 to 11 with the suite each belongs to. Criterion 12 compares
/// whole reports and is added by [`run_suite`].
pub const CRITERIA: [(u32, Suite, Criterion); 11] = [
    (1, Suite::Profile, criterion_1),
    (2, Suite::Profile, criterion_2),
    (3, Suite::Profile, criterion_3),
    (4, Suite::Profile, criterion_4),
    (5, Suite::Profile, criterion_5),
    (6, Suite::Cone, criterion_6),
    (7, Suite::Cone, criterion_7),
    (8, Suite::Cone, criterion_8),
    (9, Suite::Cone, criterion_9),
    (10, Suite::Cone, criterion_10),
    (11, Suite::Geometry, criterion_11),
];

/// Runs one numbered criterion (1 to 11). `tol` replaces the nominal 1e-6
/// tolerance of the geometric checks.
pub fn run_criterion(n: u32, tol: f64) -> Result<Vec<Check>, CliError> {
    let (_, _, f) =
        CRITERIA.iter().find(|(k, _, _)| *k == n).ok_or_else(|| CliError::invalid(format!("no criterion {n}")))?;
    f(tol)
}

fn run_selected(suite: Suite, tol: f64) -> Result<Vec<Check>, CliError> {
    let selected: Vec<Criterion> =
        CRITERIA.iter().filter(|(_, s, _)| suite == Suite::All || *s == suite).map(|(_, _, f)| *f).collect();
    let parts: Vec<Vec<Check>> = selected.par_iter().map(|f| f(tol)).collect::<Result<_, _>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// Runs the selected criteria. For the full suite the criteria are run a
/// second time and the serialized results compared (criterion 12).
pub fn run_suite(suite: Suite, tol: f64) -> Result<Report, CliError> {
    let mut checks = run_selected(suite, tol)?;
    if suite == Suite::All {
        let again = run_selected(suite, tol)?;
        let first = Report { suite, tolerance: tol, checks: checks.clone() }.to_json();
        let second = Report { suite, tolerance: tol, checks: again }.to_json();
        let differing =
            first.bytes().zip(second.bytes()).filter(|(a, b)| a != b).count() + first.len().abs_diff(second.len());
        checks.push(Check::new(
            12,
            "differing bytes between two serialized runs",
            "identical inputs give byte-identical output",
            differing as f64,
            Comparison::AtMost,
            0.0,
        ));
    }
    Ok(Report { suite, tolerance: tol, checks })
}

const PROFILE_C: [f64; 3] = [0.25, 1.0, 4.0];

/// Evaluation points `x_k = ρ k / 201`, `k = 1..=200`.
fn interior_points(rho: f64) -> impl Iterator<Item = f64> {
    (1..=200).map(move |k| rho * k as f64 / 201.0)
}

fn criterion_1(_tol: f64) -> Result<Vec<Check>, CliError> {
    PROFILE_C
        .iter()
        .map(|&c| {
            let sol = solve_branch(c, 1e-12)?;
            let mut worst = 0.0f64;
            for x in interior_points(sol.rho) {
                worst = worst.max((sol.bracket(x)? / c - 1.0).abs());
            }
            Ok(Check::new(
                1,
                format!("C = {c}: max relative deviation of B(x) from C at 200 points"),
                "[w''(1+w²) − (5/2)w w'²]/(1+w²)^{7/2} = C",
                worst,
                Comparison::AtMost,
                1e-8,
            ))
        })
        .collect()
}

fn criterion_2(_tol: f64) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for c in PROFILE_C {
        let sol = solve_branch(c, 1e-10)?;
        let mut worst = 0.0f64;
        for x in interior_points(sol.rho) {
            let w = sol.state_at(x)?.w;
            let exact = mean_curvature_closed_form(c, w);
            worst = worst.max((mean_curvature(&sol, x)? - exact).abs() / exact);
        }
        out.push(Check::new(
            2,
            format!("C = {c}: max relative error of H against the closed form"),
            "H = √(2C)(1 + 1/w²)^{-1/4} on (0, ρ]",
            worst,
            Comparison::AtMost,
            1e-8,
        ));
        out.push(Check::new(
            2,
            format!("C = {c}: |H(ρ) − √(2C)|"),
            "H(ρ) = √(2C) at the blow-up point",
            (mean_curvature(&sol, sol.rho)? - (2.0 * c).sqrt()).abs(),
            Comparison::AtMost,
            1e-8,
        ));
    }
    Ok(out)
}

fn criterion_3(_tol: f64) -> Result<Vec<Check>, CliError> {
    PROFILE_C
        .iter()
        .map(|&c| {
            let sol = solve_branch(c, 1e-10)?;
            let mut worst = 0.0f64;
            for x in interior_points(sol.rho) {
                let w = sol.state_at(x)?.w;
                let exact = c * c / (1.0 + w * w);
                worst = worst.max((grad_h_squared(&sol, x)? - exact).abs() / exact);
            }
            Ok(Check::new(
                3,
                format!("C = {c}: max relative error of |∇H|² against C²/(1+w²)"),
                "|∇H|² = C²/(1+w²) along the fundamental branch",
                worst,
                Comparison::AtMost,
                1e-8,
            ))
        })
        .collect()
}

fn relative_spread(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    (max - min) / min.abs()
}

fn criterion_4(tol: f64) -> Result<Vec<Check>, CliError> {
    let cs = [0.25, 1.0, 4.0, 9.0];
    let mut quad = (Vec::new(), Vec::new());
    let mut ivp = (Vec::new(), Vec::new());
    let mut agreement = 0.0f64;
    for c in cs {
        let (rho, xi) = branch_endpoints(c, 1e-12)?;
        quad.0.push(rho * c.sqrt());
        quad.1.push(xi * c.sqrt());
        let sol = solve_branch(c, 1e-12)?;
        ivp.0.push(sol.rho_ivp * c.sqrt());
        ivp.1.push(sol.xi_ivp * c.sqrt());
        agreement = agreement.max(((sol.rho_ivp - rho) / rho).abs()).max(((sol.xi_ivp - xi) / xi).abs());
    }
    let anchor = "w_C(x) = w_1(√C x), so ρ√C and ξ√C do not depend on C";
    Ok(vec![
        Check::new(
            4,
            "relative spread of ρ√C over C ∈ {0.25, 1, 4, 9}, quadrature",
            anchor,
            relative_spread(&quad.0),
            Comparison::AtMost,
            tol,
        ),
        Check::new(
            4,
            "relative spread of ξ√C over C ∈ {0.25, 1, 4, 9}, quadrature",
            anchor,
            relative_spread(&quad.1),
            Comparison::AtMost,
            tol,
        ),
        Check::new(
            4,
            "relative spread of ρ√C over C ∈ {0.25, 1, 4, 9}, integration",
            anchor,
            relative_spread(&ivp.0),
            Comparison::AtMost,
            tol,
        ),
        Check::new(
            4,
            "relative spread of ξ√C over C ∈ {0.25, 1, 4, 9}, integration",
            anchor,
            relative_spread(&ivp.1),
            Comparison::AtMost,
            tol,
        ),
        Check::new(
            4,
            "max relative difference between integrated and quadrature endpoints",
            "ρ and ξ from the blow-up of the integration equal the endpoint integrals",
            agreement,
            Comparison::AtMost,
            tol,
        ),
    ])
}

fn criterion_5(tol: f64) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for c in PROFILE_C {
        let p = assemble_profile(c, 3, 0.005 / c.sqrt())?;
        let k = (2.0 * c).sqrt();
        let tangent = p.junctions.iter().map(|j| j.tangent_jump).fold(0.0, f64::max);
        let mut zero = 0.0f64;
        let mut peak = 0.0f64;
        for j in &p.junctions {
            match j.kind {
                JunctionKind::HZero => zero = zero.max(j.h_left.abs()).max(j.h_right.abs()),
                JunctionKind::HMax => {
                    peak = peak
                        .max((j.h_left.abs() - k).abs())
                        .max((j.h_right.abs() - k).abs())
                        .max((j.h_left - j.h_right).abs())
                }
            }
        }
        out.push(Check::new(
            5,
            format!("C = {c}: max tangent jump at junctions"),
            "the glued profile is C¹",
            tangent,
            Comparison::AtMost,
            tol,
        ));
        out.push(Check::new(
            5,
            format!("C = {c}: max |H| at junctions between branch copies"),
            "H → 0 where the second branch meets the first",
            zero,
            Comparison::AtMost,
            tol,
        ));
        out.push(Check::new(
            5,
            format!("C = {c}: max ||H| − √(2C)| at blow-up junctions"),
            "H → ±√(2C) at the blow-up points",
            peak,
            Comparison::AtMost,
            tol,
        ));
        out.push(Check::new(
            5,
            format!("C = {c}: spread of the rigid motion between consecutive cells"),
            "the profile is periodic up to one fixed rigid motion",
            p.cell_motion_spread(),
            Comparison::AtMost,
            1e-8,
        ));
        out.push(Check::new(
            5,
            format!("C = {c}: |Gauss-map extent − π|"),
            "the Gauss map image is a great semicircle",
            (gauss_map_extent(&p) - PI).abs(),
            Comparison::AtMost,
            1e-3,
        ));
    }
    Ok(out)
}

fn criterion_6(_tol: f64) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for a in [0.1, 1.0, 10.0] {
        let c = compute_c(a)?;
        let s = solve_curvature(a, 40.0 * c + 0.1, 1e-12)?;
        let e = (a * a + a.powi(4) / 4.0).sqrt();
        out.push(Check::new(
            6,
            format!("a = {a}: max relative energy drift over 10 periods"),
            "𝓗'² + 𝓗² + 𝓗⁴/4 = a² + a⁴/4",
            s.energy_drift,
            Comparison::AtMost,
            1e-10,
        ));
        out.push(Check::new(
            6,
            format!("a = {a}: |𝓗'(c_a) + √(a² + a⁴/4)|"),
            "𝓗'(c_a) = −√(a² + a⁴/4)",
            (s.eval(c)?.dh + e).abs(),
            Comparison::AtMost,
            1e-8,
        ));
        let mut periodic = 0.0f64;
        for k in 0..=900 {
            let x = 36.0 * c * k as f64 / 900.0;
            periodic = periodic.max((s.eval(x)?.h - s.eval(x + 4.0 * c)?.h).abs());
        }
        out.push(Check::new(
            6,
            format!("a = {a}: max |𝓗(s + 4c_a) − 𝓗(s)| over 9 periods"),
            "𝓗 is periodic with period 4c_a",
            periodic,
            Comparison::AtMost,
            1e-8,
        ));
        let zeros = s.zeros.iter().take(20).enumerate().map(|(k, z)| (z - (2 * k + 1) as f64 * c).abs() / c);
        let count = s.zeros.len().min(20);
        out.push(Check::new(
            6,
            format!("a = {a}: max relative offset of the first 20 zeros from odd multiples of c_a"),
            "𝓗 vanishes exactly at the odd multiples of c_a",
            if count == 20 { zeros.fold(0.0, f64::max) } else { f64::NAN },
            Comparison::AtMost,
            1e-8,
        ));
    }
    Ok(out)
}

fn criterion_7(_tol: f64) -> Result<Vec<Check>, CliError> {
    let grid = willmore_core::cone::log_grid(1e-3, 1e2, 400)?;
    let cs: Vec<f64> = grid.par_iter().map(|&a| compute_c(a)).collect::<Result<_, _>>()?;
    let mut out = vec![Check::new(
        7,
        "max c_a − π/2 over 400 log-spaced a in [1e-3, 1e2]",
        "c_a ≤ π/2",
        cs.iter().map(|c| c - FRAC_PI_2).fold(f64::NEG_INFINITY, f64::max),
        Comparison::AtMost,
        0.0,
    )];
    for eps in [0.01, 0.05, 0.1] {
        let a_max = (2.0f64 * eps * eps + 4.0 * eps).sqrt();
        let bound = PI / (2.0 * (1.0 + eps));
        let mut worst = f64::NEG_INFINITY;
        for k in 1..40 {
            worst = worst.max(bound - compute_c(a_max * k as f64 / 40.0)?);
        }
        out.push(Check::new(
            7,
            format!("ε = {eps}: max π/(2(1+ε)) − c_a over 39 values of a below √(2ε² + 4ε)"),
            "c_a ≥ π/(2(1+ε)) for a < √(2ε² + 4ε)",
            worst,
            Comparison::AtMost,
            0.0,
        ));
    }
    let alpha = solve_limit_profile(1e-13)?.alpha;
    out.push(Check::new(
        7,
        "|100 c_100 − α|",
        "a c_a → α as a → ∞",
        (100.0 * compute_c(100.0)? - alpha).abs(),
        Comparison::AtMost,
        1e-2,
    ));
    out.push(Check::new(
        7,
        "|α from Ψ'' = −Ψ³/2 − ∫₀¹ 2dΨ/√(1−Ψ⁴)|",
        "α is the first zero of Ψ'' = −Ψ³/2, Ψ(0) = 1",
        (alpha - alpha_by_quadrature(1e-13)?).abs(),
        Comparison::AtMost,
        1e-8,
    ));
    Ok(out)
}

fn criterion_8(tol: f64) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for a in [0.1, 1.0, 5.0] {
        let c = compute_c(a)?;
        let curve = solve_sphere_curve(a, (-4.0 * c, 4.0 * c), 1e-12)?;
        let mut intrinsic = 0.0f64;
        for k in 0..=400 {
            let s = (-4.0 * c + 8.0 * c * k as f64 / 400.0).min(4.0 * c);
            intrinsic = intrinsic.max((curve.intrinsic_curvature(s)? - curve.eval(s)?.h).abs());
        }
        let half: Vec<f64> = (0..=200).map(|k| 2.0 * c * k as f64 / 200.0).collect();
        out.push(Check::new(
            8,
            format!("a = {a}: drift of |γ| = 1, γ·γ' = 0, |γ'| = 1"),
            "γ stays a unit-speed curve on the sphere",
            curve.constraint_drift,
            Comparison::AtMost,
            1e-8,
        ));
        out.push(Check::new(
            8,
            format!("a = {a}: max |γ''·(γ × γ') − 𝓗_a|"),
            "the geodesic curvature of γ is 𝓗_a",
            intrinsic,
            Comparison::AtMost,
            tol,
        ));
        out.push(Check::new(
            8,
            format!("a = {a}: max defect of the reflection symmetry about s = 0"),
            "γ(−s) is the mirror image of γ(s)",
            curve.symmetry1_defect(&half)?,
            Comparison::AtMost,
            tol,
        ));
        out.push(Check::new(
            8,
            format!("a = {a}: max defect of the reflection symmetry about s = c_a"),
            "γ(c_a − s) and γ(c_a + s) are mirror images",
            curve.symmetry2_defect(&half)?,
            Comparison::AtMost,
            tol,
        ));
    }
    Ok(out)
}

fn criterion_9(_tol: f64) -> Result<Vec<Check>, CliError> {
    let small = PI - compute_t(1e-3)?;
    Ok(vec![
        Check::new(9, "π − T(1e-3)", "T_a → π as a → 0", small, Comparison::Below, 0.05),
        Check::new(9, "π − T(1e-3) is positive", "T_a < π", small, Comparison::Above, 0.0),
        Check::new(9, "T(1e2)", "T_a → 0 as a → ∞", compute_t(100.0)?, Comparison::Below, 0.1),
    ])
}

fn criterion_10(_tol: f64) -> Result<Vec<Check>, CliError> {
    let grid = willmore_core::cone::log_grid(1e-3, 1e2, 400)?;
    let table = crate::commands::parallel_t_table(&grid)?;
    let mut out = Vec::new();
    for m in [2u32, 3, 4] {
        let found = closed_cones_from_table(m, &table)?;
        let mut margin = f64::INFINITY;
        let mut closure = 0.0f64;
        let mut oracle = 0.0f64;
        for x in &found {
            margin = margin.min(x.margin_over_2pi);
            closure = closure.max((2.0 * m as f64 * x.t_star - 2.0 * PI).abs());
            let walk = closing_arc_length(x.a_star, 2.0 * PI * m as f64 + 1.0, 1e-3, 1e-6)?;
            oracle = oracle.max((walk.chord_length - x.length).abs());
        }
        if found.is_empty() {
            margin = f64::NAN;
        }
        out.push(Check::new(
            10,
            format!("m = {m}: closed generators found"),
            "2m T_a = 2π has a solution",
            found.len() as f64,
            Comparison::AtLeast,
            1.0,
        ));
        out.push(Check::new(
            10,
            format!("m = {m}: min 4m c_a − 2π"),
            "closed Willmore cones have generator length strictly larger than 2π",
            margin,
            Comparison::Above,
            0.0,
        ));
        out.push(Check::new(
            10,
            format!("m = {m}: max |2m T_a − 2π| at the roots"),
            "the generator closes after 2m arcs",
            closure,
            Comparison::AtMost,
            1e-8,
        ));
        out.push(Check::new(
            10,
            format!("m = {m}: max |walked arc length − 4m c_a|"),
            "the closed generator has length 4m c_a",
            oracle,
            Comparison::AtMost,
            1e-4,
        ));
    }
    Ok(out)
}

fn criterion_11(_tol: f64) -> Result<Vec<Check>, CliError> {
    let anchor = "ΔH + ½(H² − 4K)H = 0, discretized at second order";
    let mut out = Vec::new();
    for c in PROFILE_C {
        let curve = ProfileCurve::new(c, 1, 1e-13)?;
        let n0 = ((curve.total_length() - 0.2) / 0.1).floor() as usize;
        let st = refinement_study(3, |k| {
            cylinder_grid(&curve, (0.1, 0.1 + 0.1 * n0 as f64), n0 * (1 << k) + 1, (0.0, 0.8), 8 * (1 << k) + 1)
        })?;
        out.push(Check::new(
            11,
            format!("C = {c}: |fitted log-log slope − 2| of the max residual on the cylinder, h = 0.1, 0.05, 0.025"),
            anchor,
            (st.fitted_slope - 2.0).abs(),
            Comparison::AtMost,
            0.2,
        ));
    }
    for a in [0.5, 1.0, 2.0] {
        let curve = solve_sphere_curve(a, (-3.0, 3.0), 1e-12)?;
        let st =
            refinement_study(3, |k| cone_grid(&curve, (1.0, 2.0), 10 * (1 << k) + 1, (-2.5, 2.5), 50 * (1 << k) + 1))?;
        out.push(Check::new(
            11,
            format!("a = {a}: |fitted log-log slope − 2| of the max residual on the cone, h_r = 0.1, 0.05, 0.025"),
            anchor,
            (st.fitted_slope - 2.0).abs(),
            Comparison::AtMost,
            0.2,
        ));
    }
    let g = ellipsoid_grid([2.0, 1.0, 1.0], (0.4, 2.7), 161, (0.0, 6.0), 321)?;
    let f = fundamental_forms(&g);
    out.push(Check::new(
        11,
        "max residual on the (2, 1, 1) ellipsoid",
        "a non-Willmore surface has a nonzero residual",
        max_abs_finite(&willmore_residual(&g, &f.h, &f.k)?),
        Comparison::Above,
        0.1,
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_never_passes() {
        for c in [Comparison::AtMost, Comparison::Below, Comparison::Above, Comparison::AtLeast] {
            assert!(!Check::new(1, "x", "y", f64::NAN, c, 1.0).pass);
        }
    }

    #[test]
    fn criteria_are_grouped_in_order() {
        let mk = |n, pass| Check {
            criterion: n,
            name: String::new(),
            anchor: "",
            measured: 0.0,
            tolerance: 0.0,
            comparison: Comparison::AtMost,
            pass,
        };
        let r = Report { suite: Suite::All, tolerance: 1e-6, checks: vec![mk(1, true), mk(1, false), mk(2, true)] };
        assert_eq!(r.criteria(), vec![(1, false), (2, true)]);
        assert!(!r.passed());
        assert_eq!(r.failed(), 1);
        assert!(r.to_json().contains("\"status\": \"fail\""));
    }
}
