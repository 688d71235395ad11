//! One function per subcommand. Each renders its artifacts to text and
//! writes them; nothing is written until every computation has succeeded.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::value::RawValue;
use willmore_core::cone::{
    closed_cones_from_table, closing_arc_length, compute_c, compute_t, log_grid, solve_curvature, solve_sphere_curve,
    ConeError,
};
use willmore_core::geometry::{build_cone_mesh, build_cylinder_mesh};
use willmore_core::profile::{assemble_profile, grad_h_squared, mean_curvature, solve_branch, ProfileCurve};

use crate::config::{
    ClosedConesConfig, ConeConfig, MeshConfig, MeshSurface, ProfileConfig, RunConfig, SweepConfig, VerifyConfig,
};
use crate::output::{csv, json_f64, write_artifact};
use crate::verify::run_suite;
use crate::CliError;

pub const PROFILE_HEADER: &str = "x,z,H,gradH2";
pub const BRANCH_HEADER: &str = "x,u,w,dw,H,gradH2";
pub const CONE_HEADER: &str = "s,H,dH";
pub const SPHERE_HEADER: &str = "s,x,y,z,tx,ty,tz,H";

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    match config {
        RunConfig::Profile(c) => profile(c),
        RunConfig::Cone(c) => cone(c),
        RunConfig::Sweep(c) => sweep(c),
        RunConfig::ClosedCones(c) => closed_cones(c),
        RunConfig::Verify(c) => verify(c),
        RunConfig::Mesh(c) => mesh(c),
    }
}

/// Writes all artifacts, the optional ones only when a path is given.
fn write_all(primary: (Option<&Path>, &str), extra: &[(Option<&Path>, String)]) -> Result<(), CliError> {
    for (path, text) in extra {
        if path.is_some() {
            write_artifact(*path, text)?;
        }
    }
    write_artifact(primary.0, primary.1)
}

/// `n + 1` points `i hi / n`, the last clamped to `hi`.
fn uniform(hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |i| (hi * i as f64 / n as f64).min(hi))
}

fn profile(cfg: &ProfileConfig) -> Result<(), CliError> {
    let curve = ProfileCurve::new(cfg.c, cfg.periods, cfg.rtol)?;
    let rows = uniform(curve.total_length(), cfg.samples * cfg.periods)
        .map(|s| curve.eval(s).map(|p| vec![p.x, p.z, p.h, p.grad_h2]))
        .collect::<Result<Vec<_>, _>>()?;
    let main = csv(PROFILE_HEADER, rows);

    let branch = match cfg.branch_out {
        Some(_) => {
            let sol = solve_branch(cfg.c, cfg.rtol)?;
            let rows = sol
                .samples()
                .into_iter()
                .map(|b| Ok(vec![b.x, b.u, b.w, b.dw, mean_curvature(&sol, b.x)?, grad_h_squared(&sol, b.x)?]))
                .collect::<Result<Vec<_>, CliError>>()?;
            csv(BRANCH_HEADER, rows)
        }
        None => String::new(),
    };
    write_all((cfg.out.as_deref(), &main), &[(cfg.branch_out.as_deref(), branch)])
}

fn cone(cfg: &ConeConfig) -> Result<(), CliError> {
    let c = compute_c(cfg.a)?;
    let end = 4.0 * c * cfg.periods as f64;
    let sol = solve_curvature(cfg.a, end, cfg.rtol)?;
    let n = cfg.samples * cfg.periods;
    let rows =
        uniform(sol.s_end(), n).map(|s| sol.eval(s).map(|p| vec![p.s, p.h, p.dh])).collect::<Result<Vec<_>, _>>()?;
    let main = csv(CONE_HEADER, rows);

    let sphere = match cfg.sphere_out {
        Some(_) => {
            let curve = solve_sphere_curve(cfg.a, (0.0, end), cfg.rtol)?;
            let rows = uniform(curve.s_max.min(end), n)
                .map(|s| {
                    curve.eval(s).map(|p| {
                        let (g, t) = (p.gamma, p.dgamma);
                        vec![p.s, g[0], g[1], g[2], t[0], t[1], t[2], p.h]
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            csv(SPHERE_HEADER, rows)
        }
        None => String::new(),
    };
    write_all((cfg.out.as_deref(), &main), &[(cfg.sphere_out.as_deref(), sphere)])
}

/// `T_a` on a grid, evaluated in parallel and returned in grid order.
pub fn parallel_t_table(grid: &[f64]) -> Result<Vec<(f64, f64)>, ConeError> {
    grid.par_iter().map(|&a| compute_t(a).map(|t| (a, t))).collect()
}

pub fn sweep_header(m: &[u32]) -> String {
    let mut h = String::from("a,c_a,energy,T_a");
    for m in m {
        h.push_str(&format!(",length_m{m}"));
    }
    h
}

fn sweep(cfg: &SweepConfig) -> Result<(), CliError> {
    let grid = log_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.n)?;
    let rows: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|&a| {
            let c = compute_c(a)?;
            let mut row = vec![a, c, a * a + a.powi(4) / 4.0, compute_t(a)?];
            row.extend(cfg.m.iter().map(|&m| 4.0 * m as f64 * c));
            Ok(row)
        })
        .collect::<Result<_, ConeError>>()?;
    write_artifact(cfg.out.as_deref(), &csv(&sweep_header(&cfg.m), rows))
}

#[derive(Serialize)]
struct CandidateRecord {
    m: u32,
    a_star: Box<RawValue>,
    c_star: Box<RawValue>,
    t_star: Box<RawValue>,
    length: Box<RawValue>,
    margin_over_2pi: Box<RawValue>,
    arc_length_oracle: Box<RawValue>,
}

fn closed_cones(cfg: &ClosedConesConfig) -> Result<(), CliError> {
    let grid = log_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.n)?;
    let table = parallel_t_table(&grid)?;
    let found = closed_cones_from_table(cfg.m, &table)?;
    let records: Vec<CandidateRecord> = found
        .par_iter()
        .map(|x| {
            let walk = closing_arc_length(x.a_star, 2.0 * std::f64::consts::PI * x.m as f64 + 1.0, 1e-3, 1e-6)?;
            Ok(CandidateRecord {
                m: x.m,
                a_star: json_f64(x.a_star),
                c_star: json_f64(x.c_star),
                t_star: json_f64(x.t_star),
                length: json_f64(x.length),
                margin_over_2pi: json_f64(x.margin_over_2pi),
                arc_length_oracle: json_f64(walk.chord_length),
            })
        })
        .collect::<Result<_, ConeError>>()?;
    let mut text = serde_json::to_string_pretty(&records).expect("records serialize");
    text.push('\n');
    write_artifact(cfg.out.as_deref(), &text)
}

fn verify(cfg: &VerifyConfig) -> Result<(), CliError> {
    let report = run_suite(cfg.suite, cfg.tol)?;
    write_artifact(cfg.out.as_deref(), &report.to_json())?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::VerificationFailed { failed: report.failed(), total: report.checks.len() })
    }
}

fn mesh(cfg: &MeshConfig) -> Result<(), CliError> {
    let mesh = match cfg.surface {
        MeshSurface::Cylinder { c, periods, step, y_extent, ny } => {
            build_cylinder_mesh(&assemble_profile(c, periods, step)?, y_extent, ny)?
        }
        MeshSurface::Cone { a, r0, r1, nr, ns } => {
            let c = compute_c(a)?;
            let curve = solve_sphere_curve(a, (-2.0 * c, 2.0 * c), willmore_core::cone::DEFAULT_RTOL)?;
            build_cone_mesh(&curve, (r0, r1), nr, ns)?
        }
    };
    write_all((cfg.out.as_deref(), &mesh.to_obj()), &[(cfg.scalars.as_deref(), mesh.scalars_csv())])
}
