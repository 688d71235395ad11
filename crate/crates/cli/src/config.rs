//! Command-line flags and the optional JSON config file.
//!
//! Each command's parameters are one struct that clap parses from flags and
//! serde parses from the config file, with every field optional. The two are
//! merged field by field (flags win) and the result is validated into a
//! resolved config with defaults filled in.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Deserializer};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "willmore", version, about = "Flat Willmore cylinders and Willmore cones")]
pub struct Cli {
    /// JSON file with parameters for the chosen command. Flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the periodic profile curve of a flat Willmore cylinder.
    Profile(ProfileArgs),
    /// Curvature of a cone generator over its period, optionally the curve itself.
    Cone(ConeArgs),
    /// Tabulate c_a, energy and T_a over a grid of a.
    Sweep(SweepArgs),
    /// Find closed cone generators with 2m T_a = 2π.
    ClosedCones(ClosedConesArgs),
    /// Run the verification suite and write a JSON report.
    Verify(VerifyArgs),
    /// Export a triangle mesh as OBJ with a sidecar CSV of H and K.
    Mesh(MeshArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Profile(_) => "profile",
            Command::Cone(_) => "cone",
            Command::Sweep(_) => "sweep",
            Command::ClosedCones(_) => "closed-cones",
            Command::Verify(_) => "verify",
            Command::Mesh(_) => "mesh",
        }
    }
}

/// `lo:hi:n`, a log-spaced grid of `n` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(format!("grid '{s}' is not of the form lo:hi:n"));
        };
        let lo: f64 = lo.trim().parse().map_err(|_| format!("grid lower end '{lo}' is not a number"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| format!("grid upper end '{hi}' is not a number"))?;
        let n: usize = n.trim().parse().map_err(|_| format!("grid size '{n}' is not a non-negative integer"))?;
        Ok(GridSpec { lo, hi, n })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.n)
    }
}

impl<'de> Deserialize<'de> for GridSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl GridSpec {
    fn validate(self) -> Result<Self, CliError> {
        if !(self.lo > 0.0 && self.lo.is_finite()) {
            return Err(CliError::invalid(format!("grid lower end must be positive, got {}", self.lo)));
        }
        if !(self.hi > self.lo && self.hi.is_finite()) {
            return Err(CliError::invalid(format!("grid upper end must exceed {}, got {}", self.lo, self.hi)));
        }
        if self.n < 2 {
            return Err(CliError::invalid(format!("grid needs at least 2 points, got {}", self.n)));
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Profile,
    Cone,
    Geometry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cylinder,
    Cone,
}

trait Merge {
    fn merge(self, file: Self) -> Self;
}

macro_rules! mergeable {
    ($t:ident { $($f:ident),* }) => {
        impl Merge for $t {
            fn merge(self, file: Self) -> Self {
                $t { $($f: self.$f.or(file.$f)),* }
            }
        }
    };
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ProfileArgs {
    /// Willmore constant C > 0 [default: 1]
    #[arg(long = "c")]
    pub c: Option<f64>,
    /// Number of periods [default: 1]
    #[arg(long)]
    pub periods: Option<usize>,
    /// Samples per period, uniform in arc length [default: 512]
    #[arg(long)]
    pub samples: Option<usize>,
    /// Integration tolerance [default: 1e-12]
    #[arg(long)]
    pub rtol: Option<f64>,
    /// Output CSV (x,z,H,gradH2); standard output if absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the first branch as CSV (x,u,w,dw,H,gradH2)
    #[arg(long)]
    pub branch_out: Option<PathBuf>,
}
mergeable!(ProfileArgs { c, periods, samples, rtol, out, branch_out });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConeArgs {
    /// Initial curvature a > 0 [default: 1]
    #[arg(long = "a")]
    pub a: Option<f64>,
    /// Number of periods 4 c_a to sample [default: 1]
    #[arg(long)]
    pub periods: Option<usize>,
    /// Samples per period [default: 400]
    #[arg(long)]
    pub samples: Option<usize>,
    /// Integration tolerance [default: 1e-12]
    #[arg(long)]
    pub rtol: Option<f64>,
    /// Output CSV (s,H,dH); standard output if absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the generator on the sphere as CSV (s,x,y,z,tx,ty,tz,H)
    #[arg(long)]
    pub sphere_out: Option<PathBuf>,
}
mergeable!(ConeArgs { a, periods, samples, rtol, out, sphere_out });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SweepArgs {
    /// Log grid of a as lo:hi:n [default: 1e-3:1e2:400]
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    /// Values of m for the length columns 4 m c_a [default: 2,3,4]
    #[arg(long, value_delimiter = ',')]
    pub m: Option<Vec<u32>>,
    /// Output CSV; standard output if absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}
mergeable!(SweepArgs { grid, m, out });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ClosedConesArgs {
    /// Number of symmetric pieces, m >= 2 [default: 2]
    #[arg(long)]
    pub m: Option<u32>,
    /// Log grid of a as lo:hi:n [default: 1e-3:1e2:400]
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    /// Output JSON; standard output if absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}
mergeable!(ClosedConesArgs { m, grid, out });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct VerifyArgs {
    /// Which checks to run [default: all]
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Tolerance for the geometric checks [default: 1e-6]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output JSON report; standard output if absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}
mergeable!(VerifyArgs { suite, tol, out });

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct MeshArgs {
    /// Surface family [default: cylinder]
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Cylinder: Willmore constant C [default: 1]
    #[arg(long = "c")]
    pub c: Option<f64>,
    /// Cylinder: number of periods [default: 1]
    #[arg(long)]
    pub periods: Option<usize>,
    /// Cylinder: arc-length spacing of the profile samples [default: 0.02]
    #[arg(long)]
    pub step: Option<f64>,
    /// Cylinder: length along the rulings [default: 1]
    #[arg(long)]
    pub y_extent: Option<f64>,
    /// Cylinder: vertices along the rulings [default: 11]
    #[arg(long)]
    pub ny: Option<usize>,
    /// Cone: initial curvature a [default: 1]
    #[arg(long = "a")]
    pub a: Option<f64>,
    /// Cone: inner radius, > 0 [default: 0.5]
    #[arg(long)]
    pub r0: Option<f64>,
    /// Cone: outer radius [default: 2]
    #[arg(long)]
    pub r1: Option<f64>,
    /// Cone: vertices along each ray [default: 16]
    #[arg(long)]
    pub nr: Option<usize>,
    /// Cone: vertices along the generator, over one period [default: 200]
    #[arg(long)]
    pub ns: Option<usize>,
    /// Output OBJ; standard output if absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sidecar CSV of per-vertex H and K, keyed by OBJ vertex index
    #[arg(long)]
    pub scalars: Option<PathBuf>,
}
mergeable!(MeshArgs { family, c, periods, step, y_extent, ny, a, r0, r1, nr, ns, out, scalars });

/// Reads the config file for `command`. An optional `"command"` key must
/// name the same command; every other key must be a parameter of it.
fn read_config<T: for<'de> Deserialize<'de> + Default>(path: Option<&Path>, command: &str) -> Result<T, CliError> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let mut value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("config {}: {e}", path.display())))?;
    let Some(map) = value.as_object_mut() else {
        return Err(CliError::invalid(format!("config {}: expected a JSON object", path.display())));
    };
    if let Some(c) = map.remove("command") {
        if c.as_str() != Some(command) {
            return Err(CliError::invalid(format!(
                "config {}: command {c} does not match '{command}'",
                path.display()
            )));
        }
    }
    serde_json::from_value(value).map_err(|e| CliError::invalid(format!("config {}: {e}", path.display())))
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

fn at_least(name: &str, v: usize, min: usize) -> Result<usize, CliError> {
    if v >= min {
        Ok(v)
    } else {
        Err(CliError::invalid(format!("{name} must be at least {min}, got {v}")))
    }
}

fn tolerance(v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v < 1e-2 {
        Ok(v)
    } else {
        Err(CliError::invalid(format!("rtol must lie in (0, 1e-2), got {v}")))
    }
}

pub const DEFAULT_GRID: GridSpec = GridSpec { lo: 1e-3, hi: 1e2, n: 400 };

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileConfig {
    pub c: f64,
    pub periods: usize,
    pub samples: usize,
    pub rtol: f64,
    pub out: Option<PathBuf>,
    pub branch_out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeConfig {
    pub a: f64,
    pub periods: usize,
    pub samples: usize,
    pub rtol: f64,
    pub out: Option<PathBuf>,
    pub sphere_out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub grid: GridSpec,
    pub m: Vec<u32>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedConesConfig {
    pub m: u32,
    pub grid: GridSpec,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub tol: f64,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeshSurface {
    Cylinder { c: f64, periods: usize, step: f64, y_extent: f64, ny: usize },
    Cone { a: f64, r0: f64, r1: f64, nr: usize, ns: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshConfig {
    pub surface: MeshSurface,
    pub out: Option<PathBuf>,
    pub scalars: Option<PathBuf>,
}

/// A validated command with all defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub enum RunConfig {
    Profile(ProfileConfig),
    Cone(ConeConfig),
    Sweep(SweepConfig),
    ClosedCones(ClosedConesConfig),
    Verify(VerifyConfig),
    Mesh(MeshConfig),
}

impl RunConfig {
    /// Merges flags over the config file over defaults and validates.
    pub fn resolve(cli: Cli) -> Result<Self, CliError> {
        let path = cli.config.as_deref();
        let name = cli.command.name();
        Ok(match cli.command {
            Command::Profile(f) => {
                let p = f.merge(read_config(path, name)?);
                RunConfig::Profile(ProfileConfig {
                    c: positive("c", p.c.unwrap_or(1.0))?,
                    periods: at_least("periods", p.periods.unwrap_or(1), 1)?,
                    samples: at_least("samples", p.samples.unwrap_or(512), 4)?,
                    rtol: tolerance(p.rtol.unwrap_or(willmore_core::profile::ASSEMBLY_RTOL))?,
                    out: p.out,
                    branch_out: p.branch_out,
                })
            }
            Command::Cone(f) => {
                let p = f.merge(read_config(path, name)?);
                RunConfig::Cone(ConeConfig {
                    a: positive("a", p.a.unwrap_or(1.0))?,
                    periods: at_least("periods", p.periods.unwrap_or(1), 1)?,
                    samples: at_least("samples", p.samples.unwrap_or(400), 2)?,
                    rtol: tolerance(p.rtol.unwrap_or(willmore_core::cone::DEFAULT_RTOL))?,
                    out: p.out,
                    sphere_out: p.sphere_out,
                })
            }
            Command::Sweep(f) => {
                let p = f.merge(read_config(path, name)?);
                let m = p.m.unwrap_or_else(|| vec![2, 3, 4]);
                if let Some(bad) = m.iter().find(|&&m| m < 1) {
                    return Err(CliError::invalid(format!("m must be at least 1, got {bad}")));
                }
                RunConfig::Sweep(SweepConfig { grid: p.grid.unwrap_or(DEFAULT_GRID).validate()?, m, out: p.out })
            }
            Command::ClosedCones(f) => {
                let p = f.merge(read_config(path, name)?);
                let m = p.m.unwrap_or(2);
                if m < 2 {
                    return Err(CliError::invalid(format!(
                        "m must be at least 2 (m = 1 is the great circle), got {m}"
                    )));
                }
                RunConfig::ClosedCones(ClosedConesConfig {
                    m,
                    grid: p.grid.unwrap_or(DEFAULT_GRID).validate()?,
                    out: p.out,
                })
            }
            Command::Verify(f) => {
                let p = f.merge(read_config(path, name)?);
                RunConfig::Verify(VerifyConfig {
                    suite: p.suite.unwrap_or(Suite::All),
                    tol: positive("tol", p.tol.unwrap_or(1e-6))?,
                    out: p.out,
                })
            }
            Command::Mesh(f) => {
                let p = f.merge(read_config(path, name)?);
                let family = p.family.unwrap_or(Family::Cylinder);
                let cylinder_keys = [
                    ("c", p.c.is_some()),
                    ("periods", p.periods.is_some()),
                    ("step", p.step.is_some()),
                    ("y-extent", p.y_extent.is_some()),
                    ("ny", p.ny.is_some()),
                ];
                let cone_keys = [
                    ("a", p.a.is_some()),
                    ("r0", p.r0.is_some()),
                    ("r1", p.r1.is_some()),
                    ("nr", p.nr.is_some()),
                    ("ns", p.ns.is_some()),
                ];
                let (label, foreign) = match family {
                    Family::Cylinder => ("cylinder", cone_keys),
                    Family::Cone => ("cone", cylinder_keys),
                };
                if let Some((key, _)) = foreign.iter().find(|(_, set)| *set) {
                    return Err(CliError::invalid(format!("{key} does not apply to the {label} family")));
                }
                let surface = match family {
                    Family::Cylinder => MeshSurface::Cylinder {
                        c: positive("c", p.c.unwrap_or(1.0))?,
                        periods: at_least("periods", p.periods.unwrap_or(1), 1)?,
                        step: positive("step", p.step.unwrap_or(0.02))?,
                        y_extent: positive("y-extent", p.y_extent.unwrap_or(1.0))?,
                        ny: at_least("ny", p.ny.unwrap_or(11), 2)?,
                    },
                    Family::Cone => {
                        let r0 = positive("r0", p.r0.unwrap_or(0.5))?;
                        let r1 = positive("r1", p.r1.unwrap_or(2.0))?;
                        if r1 <= r0 {
                            return Err(CliError::invalid(format!("r1 must exceed r0 = {r0}, got {r1}")));
                        }
                        MeshSurface::Cone {
                            a: positive("a", p.a.unwrap_or(1.0))?,
                            r0,
                            r1,
                            nr: at_least("nr", p.nr.unwrap_or(16), 2)?,
                            ns: at_least("ns", p.ns.unwrap_or(200), 2)?,
                        }
                    }
                };
                RunConfig::Mesh(MeshConfig { surface, out: p.out, scalars: p.scalars })
            }
        })
    }
}
