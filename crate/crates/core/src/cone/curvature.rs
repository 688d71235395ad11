//! The curvature function of the cone generator and its large-`a` limit.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{check_positive, ConeError};
use crate::integrator::{integrate, quad_improper, IvpProblem, IvpSolution, SingularEnds, TerminalReason};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSample {
    pub s: f64,
    pub h: f64,
    pub dh: f64,
}

/// `𝓗_a` on `[0, s_end]` with `𝓗(0) = a`, `𝓗'(0) = 0`.
#[derive(Debug, Clone)]
pub struct ConeGeneratorSolution {
    pub a: f64,
    /// First positive zero of `𝓗_a`.
    pub c_a: f64,
    /// `a² + a⁴/4`, the conserved value of `𝓗'² + 𝓗² + 𝓗⁴/4`.
    pub energy: f64,
    /// `4 c_a`
    pub period: f64,
    /// Largest relative deviation of the energy over the samples.
    pub energy_drift: f64,
    /// All located zeros of `𝓗` in `(0, s_end]`.
    pub zeros: Vec<f64>,
    ivp: IvpSolution,
}

fn curvature_problem(h0: f64, dh0: f64) -> Result<IvpProblem<'static>, ConeError> {
    Ok(IvpProblem::new(0.0, vec![h0, dh0], |_, y, out| {
        out[0] = y[1];
        out[1] = -y[0] * (1.0 + 0.5 * y[0] * y[0]);
    })?)
}

fn energy_of(h: f64, dh: f64) -> f64 {
    dh * dh + h * h + 0.25 * h * h * h * h
}

fn curvature_atol(scale: f64, rtol: f64) -> f64 {
    rtol * scale.min(1.0) * 1e-2
}

/// Integrates the curvature equation on `[0, s_end]` and locates its zeros.
pub fn solve_curvature(a: f64, s_end: f64, rtol: f64) -> Result<ConeGeneratorSolution, ConeError> {
    check_positive("a", a)?;
    let sol = solve_curvature_from(a, 0.0, s_end, rtol)?;
    let zeros: Vec<f64> = sol.events.iter().map(|e| e.t).collect();
    let c_a = *zeros.first().ok_or(ConeError::ZeroNotFound { a, searched: s_end })?;
    let energy = a * a + 0.25 * a * a * a * a;
    let energy_drift =
        sol.samples().map(|(_, y)| libm::fabs(energy_of(y[0], y[1]) - energy) / energy).fold(0.0, f64::max);
    Ok(ConeGeneratorSolution { a, c_a, energy, period: 4.0 * c_a, energy_drift, zeros, ivp: sol })
}

/// Raw integration from arbitrary data `(𝓗(0), 𝓗'(0))` up to `s_end`,
/// which may be negative. Zeros of `𝓗` are recorded as events.
pub fn solve_curvature_from(h0: f64, dh0: f64, s_end: f64, rtol: f64) -> Result<IvpSolution, ConeError> {
    if !(s_end.is_finite() && s_end != 0.0) {
        return Err(ConeError::InvalidParameter { name: "s_end", value: s_end });
    }
    check_positive("rtol", rtol)?;
    let scale = libm::sqrt(energy_of(h0, dh0)).max(1e-300);
    let problem = curvature_problem(h0, dh0)?.with_event(|_, y| y[0], false);
    Ok(integrate(&problem, s_end, rtol, curvature_atol(scale, rtol))?)
}

impl ConeGeneratorSolution {
    pub fn s_end(&self) -> f64 {
        self.ivp.t_last()
    }

    pub fn samples(&self) -> Vec<CurvatureSample> {
        self.ivp.samples().map(|(s, y)| CurvatureSample { s, h: y[0], dh: y[1] }).collect()
    }

    /// `(𝓗, 𝓗')` at `s ∈ [0, s_end]`.
    pub fn eval(&self, s: f64) -> Result<CurvatureSample, ConeError> {
        let y = self.ivp.dense_eval(s).ok_or(ConeError::OutOfRange { s, lo: 0.0, hi: self.s_end() })?;
        Ok(CurvatureSample { s, h: y[0], dh: y[1] })
    }

    /// `𝓗''(s)` from differentiating the interpolant of `𝓗'`.
    pub fn second_derivative(&self, s: f64) -> Result<f64, ConeError> {
        let d = self.ivp.dense_derivative(s).ok_or(ConeError::OutOfRange { s, lo: 0.0, hi: self.s_end() })?;
        Ok(d[1])
    }
}

/// First positive zero of `𝓗_a`, which lies in `(0, π/2]`.
pub fn compute_c(a: f64) -> Result<f64, ConeError> {
    compute_c_with(a, super::DEFAULT_RTOL)
}

pub(crate) fn compute_c_with(a: f64, rtol: f64) -> Result<f64, ConeError> {
    check_positive("a", a)?;
    let problem = curvature_problem(a, 0.0)?.with_event(|_, y| y[0], true);
    let scale = libm::sqrt(energy_of(a, 0.0));
    let sol = integrate(&problem, PI, rtol, curvature_atol(scale, rtol))?;
    match sol.terminal_reason {
        TerminalReason::EventHit(_) => Ok(sol.t_last()),
        _ => Err(ConeError::ZeroNotFound { a, searched: PI }),
    }
}

/// `Ψ'' = −Ψ³/2`, `Ψ(0) = 1`, `Ψ'(0) = 0`: the limit of `𝓗_a(s/a)/a`.
#[derive(Debug, Clone)]
pub struct LimitProfile {
    /// First positive zero of `Ψ`.
    pub alpha: f64,
    pub zeros: Vec<f64>,
    ivp: IvpSolution,
}

pub fn solve_limit_profile(rtol: f64) -> Result<LimitProfile, ConeError> {
    check_positive("rtol", rtol)?;
    let problem = IvpProblem::new(0.0, vec![1.0, 0.0], |_, y, out| {
        out[0] = y[1];
        out[1] = -0.5 * y[0] * y[0] * y[0];
    })?
    .with_event(|_, y| y[0], false);
    let ivp = integrate(&problem, 12.0, rtol, rtol * 1e-2)?;
    let zeros: Vec<f64> = ivp.events.iter().map(|e| e.t).collect();
    let alpha = *zeros.first().ok_or(ConeError::ZeroNotFound { a: f64::INFINITY, searched: 12.0 })?;
    Ok(LimitProfile { alpha, zeros, ivp })
}

impl LimitProfile {
    /// `(Ψ, Ψ')` at `s ∈ [0, 12]`.
    pub fn eval(&self, s: f64) -> Result<(f64, f64), ConeError> {
        let y = self.ivp.dense_eval(s).ok_or(ConeError::OutOfRange { s, lo: 0.0, hi: self.ivp.t_last() })?;
        Ok((y[0], y[1]))
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.ivp.samples().map(|(s, y)| (s, y[0], y[1]))
    }
}

/// `α = ∫₀¹ 2 dΨ / √(1 − Ψ⁴)`, from the energy identity of the limit profile.
pub fn alpha_by_quadrature(rtol: f64) -> Result<f64, ConeError> {
    Ok(quad_improper(
        |p| {
            let q = 1.0 - p;
            2.0 / libm::sqrt(q * (1.0 + p) * (1.0 + p * p))
        },
        0.0,
        1.0,
        SingularEnds::UPPER,
        rtol,
    )?)
}
