//! The fundamental branch of the cylinder profile and its second chart.

use alloc::vec;
use alloc::vec::Vec;

use super::ProfileError;
use crate::integrator::{integrate, quad_improper, IvpProblem, IvpSolution, SingularEnds, TerminalReason};

/// One stored point of the branch: `u` is the profile height, `w = u'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchSample {
    pub x: f64,
    pub u: f64,
    pub w: f64,
    pub dw: f64,
}

/// Full local state including the second derivative of `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchState {
    pub x: f64,
    pub u: f64,
    pub w: f64,
    pub dw: f64,
    pub d2w: f64,
}

/// `(1 + w²)^{5/4}`
#[inline]
fn v52(w: f64) -> f64 {
    libm::pow(1.0 + w * w, 1.25)
}

fn check_inputs(c: f64, rtol: f64) -> Result<(), ProfileError> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(ProfileError::InvalidConstant(c));
    }
    if !(rtol > 0.0 && rtol < 1e-2) {
        return Err(ProfileError::InvalidTolerance(rtol));
    }
    Ok(())
}

fn quad_tol(rtol: f64) -> f64 {
    (rtol * 1e-2).max(1e-14)
}

/// `ρ` and `ξ` from the first-order reduction `w' = √(2Cw)(1+w²)^{5/4}`,
/// integrated in `w` over `(0, ∞)`.
pub fn branch_endpoints(c: f64, rtol: f64) -> Result<(f64, f64), ProfileError> {
    check_inputs(c, rtol)?;
    let k = libm::sqrt(2.0 * c);
    let rho =
        quad_improper(|w| 1.0 / (k * libm::sqrt(w) * v52(w)), 0.0, f64::INFINITY, SingularEnds::LOWER, quad_tol(rtol))?;
    let xi = quad_improper(|w| libm::sqrt(w) / (k * v52(w)), 0.0, f64::INFINITY, SingularEnds::LOWER, quad_tol(rtol))?;
    Ok((rho, xi))
}

/// The maximal branch on `[0, ρ)` with `u(0) = w(0) = w'(0) = 0`.
#[derive(Debug, Clone)]
pub struct ProfileSolution {
    pub c: f64,
    /// Half-width of the maximal interval, from quadrature in `w`.
    pub rho: f64,
    /// `u(ρ)`, from quadrature in `w`.
    pub xi: f64,
    /// Last point reached by the IVP before blow-up was detected.
    pub rho_ivp: f64,
    /// `u` at that point.
    pub xi_ivp: f64,
    pub rtol: f64,
    ivp: IvpSolution,
}

/// Integrates the profile equation from `x = 0` until `w` blows up.
///
/// The IVP runs on `(u, w, p)` with `p = (1+w²)^{-5/4} w'`, for which the
/// equation reads `p' = C(1+w²)^{5/4}`. This system is regular at the
/// origin, so no series start is needed.
pub fn solve_branch(c: f64, rtol: f64) -> Result<ProfileSolution, ProfileError> {
    check_inputs(c, rtol)?;
    let (rho, xi) = branch_endpoints(c, rtol)?;
    let problem = IvpProblem::new(0.0, vec![0.0, 0.0, 0.0], move |_, y, out| {
        let g = v52(y[1]);
        out[0] = y[1];
        out[1] = y[2] * g;
        out[2] = c * g;
    })?;
    let sol = integrate(&problem, 2.0 * rho, rtol, rtol * 1e-4)?;
    if sol.terminal_reason != TerminalReason::StepUnderflow {
        return Err(ProfileError::NoBlowUp { reached: sol.t_last() });
    }
    let rho_ivp = sol.t_last();
    let xi_ivp = sol.y_last()[0];
    Ok(ProfileSolution { c, rho, xi, rho_ivp, xi_ivp, rtol, ivp: sol })
}

impl ProfileSolution {
    /// Accepted integration points, `x` increasing from 0.
    pub fn samples(&self) -> Vec<BranchSample> {
        self.ivp.samples().map(|(x, y)| BranchSample { x, u: y[0], w: y[1], dw: y[2] * v52(y[1]) }).collect()
    }

    pub fn x_stop(&self) -> f64 {
        self.rho_ivp
    }

    /// State at `x ∈ [0, ρ]`, with `w''` taken from the equation. Past the
    /// last integration point `w` already exceeds the blow-up guard, and the
    /// terminal state is returned.
    pub fn state_at(&self, x: f64) -> Result<BranchState, ProfileError> {
        let y = self.raw_state(x)?;
        let (u, w, p) = (y[0], y[1], y[2]);
        let g = v52(w);
        let dw = p * g;
        let d2w = self.c * g * g + 2.5 * p * w * dw * libm::pow(1.0 + w * w, 0.25);
        Ok(BranchState { x, u, w, dw, d2w })
    }

    fn raw_state(&self, x: f64) -> Result<Vec<f64>, ProfileError> {
        if !(x >= 0.0 && x <= self.rho.max(self.rho_ivp)) {
            return Err(ProfileError::OutOfRange { x, lo: 0.0, hi: self.rho });
        }
        Ok(if x <= self.rho_ivp {
            self.ivp.dense_eval(x).expect("inside covered interval")
        } else {
            self.ivp.y_last().to_vec()
        })
    }

    /// The bracket `[w''(1+w²) − (5/2)w w'²]/(1+w²)^{7/2}`, constant along
    /// exact solutions. Here `w''` comes from differentiating the dense
    /// interpolant rather than from the equation, so the value measures how
    /// well the computed curve satisfies the equation between steps.
    pub fn bracket(&self, x: f64) -> Result<f64, ProfileError> {
        let y = self.raw_state(x)?;
        let t = x.min(self.rho_ivp);
        let dy = self.ivp.dense_derivative(t).expect("inside covered interval");
        let (w, p) = (y[1], y[2]);
        let g = v52(w);
        let dw = p * g;
        let d2w = dy[2] * g + p * 2.5 * w * dw * libm::pow(1.0 + w * w, 0.25);
        let q = 1.0 + w * w;
        Ok((d2w * q - 2.5 * w * dw * dw) / libm::pow(q, 3.5))
    }

    /// Inverse parametrization `x(w) = ∫₀^w dt / (√(2Ct)(1+t²)^{5/4})`.
    pub fn x_of_w(&self, w: f64) -> Result<f64, ProfileError> {
        if !(w >= 0.0) {
            return Err(ProfileError::OutOfRange { x: w, lo: 0.0, hi: f64::INFINITY });
        }
        if w == 0.0 {
            return Ok(0.0);
        }
        if w == f64::INFINITY {
            return Ok(self.rho);
        }
        let k = libm::sqrt(2.0 * self.c);
        Ok(quad_improper(|t| 1.0 / (k * libm::sqrt(t) * v52(t)), 0.0, w, SingularEnds::LOWER, quad_tol(self.rtol))?)
    }

    /// `u` as a function of `w`, the companion of [`Self::x_of_w`].
    pub fn u_of_w(&self, w: f64) -> Result<f64, ProfileError> {
        if !(w >= 0.0) {
            return Err(ProfileError::OutOfRange { x: w, lo: 0.0, hi: f64::INFINITY });
        }
        if w == 0.0 {
            return Ok(0.0);
        }
        if w == f64::INFINITY {
            return Ok(self.xi);
        }
        let k = libm::sqrt(2.0 * self.c);
        Ok(quad_improper(|t| libm::sqrt(t) / (k * v52(t)), 0.0, w, SingularEnds::LOWER, quad_tol(self.rtol))?)
    }
}

/// `H = w'/(1+w²)^{3/2}`, the curvature of the profile (sum convention).
pub fn mean_curvature(sol: &ProfileSolution, x: f64) -> Result<f64, ProfileError> {
    let s = sol.state_at(x)?;
    Ok(s.dw / libm::pow(1.0 + s.w * s.w, 1.5))
}

/// `H` from the closed form `√(2C)(1 + 1/w²)^{-1/4}`.
pub fn mean_curvature_closed_form(c: f64, w: f64) -> f64 {
    if w == 0.0 {
        return 0.0;
    }
    libm::sqrt(2.0 * c) * libm::pow(1.0 + 1.0 / (w * w), -0.25)
}

/// `|∇H|²` on the surface, evaluated as
/// `(1+w²)^{-1}[(w''(1+w²) − 3w'²w)/(1+w²)^{5/2}]²`.
///
/// The numerator cancels to relative size `1/w²`, so accuracy degrades as
/// `x → ρ`. At the blow-up end itself (`w = ∞`) the value is the limit 0.
pub fn grad_h_squared(sol: &ProfileSolution, x: f64) -> Result<f64, ProfileError> {
    let s = sol.state_at(x)?;
    if x > sol.rho_ivp {
        return Ok(0.0);
    }
    Ok(grad_expression(s.w, s.dw, s.d2w))
}

pub(crate) fn grad_expression(w: f64, dw: f64, d2w: f64) -> f64 {
    let q = 1.0 + w * w;
    let inner = (d2w * q - 3.0 * dw * dw * w) / libm::pow(q, 2.5);
    inner * inner / q
}

/// Second chart: `w̃' = √(2C)(1+w̃²)^{5/4}`, `w̃(0) = ũ(0) = 0`, on `(−ξ, ξ)`.
#[derive(Debug, Clone)]
pub struct SecondBranch {
    pub c: f64,
    /// Half-width, from quadrature in `w̃`.
    pub xi: f64,
    /// `ũ(±ξ)`, from quadrature in `w̃`.
    pub height: f64,
    pub xi_ivp_forward: f64,
    pub xi_ivp_backward: f64,
    forward: IvpSolution,
    backward: IvpSolution,
}

pub fn solve_second_branch(c: f64, rtol: f64) -> Result<SecondBranch, ProfileError> {
    check_inputs(c, rtol)?;
    let k = libm::sqrt(2.0 * c);
    let xi = quad_improper(|w| 1.0 / (k * v52(w)), 0.0, f64::INFINITY, SingularEnds::NONE, quad_tol(rtol))?;
    let height = quad_improper(|w| w / (k * v52(w)), 0.0, f64::INFINITY, SingularEnds::NONE, quad_tol(rtol))?;
    let problem = IvpProblem::new(0.0, vec![0.0, 0.0], move |_, y, out| {
        out[0] = y[1];
        out[1] = k * v52(y[1]);
    })?;
    let forward = integrate(&problem, 2.0 * xi, rtol, rtol * 1e-4)?;
    let backward = integrate(&problem, -2.0 * xi, rtol, rtol * 1e-4)?;
    for s in [&forward, &backward] {
        if s.terminal_reason != TerminalReason::StepUnderflow {
            return Err(ProfileError::NoBlowUp { reached: s.t_last() });
        }
    }
    Ok(SecondBranch {
        c,
        xi,
        height,
        xi_ivp_forward: forward.t_last(),
        xi_ivp_backward: backward.t_last(),
        forward,
        backward,
    })
}

impl SecondBranch {
    /// Accepted integration points on both sides, `x̃` increasing.
    pub fn samples(&self) -> Vec<BranchSample> {
        let k = libm::sqrt(2.0 * self.c);
        let mk = |(x, y): (f64, &[f64])| BranchSample { x, u: y[0], w: y[1], dw: k * v52(y[1]) };
        let mut out: Vec<BranchSample> = self.backward.samples().skip(1).map(mk).collect();
        out.reverse();
        out.extend(self.forward.samples().map(mk));
        out
    }

    /// State at `x̃`. Here `dw` is the derivative of the interpolant, so the
    /// conserved quantity `(1+w̃²)^{-5/4} w̃'` is a genuine check.
    pub fn state_at(&self, x: f64) -> Result<BranchState, ProfileError> {
        let sol = if x >= 0.0 { &self.forward } else { &self.backward };
        if !sol.covers(x) {
            return Err(ProfileError::OutOfRange { x, lo: self.xi_ivp_backward, hi: self.xi_ivp_forward });
        }
        let y = sol.dense_eval(x).expect("covered");
        let dy = sol.dense_derivative(x).unwrap_or_else(|| vec![y[1], 0.0]);
        let w = y[1];
        let dw = dy[1];
        let d2w = 2.5 * libm::sqrt(2.0 * self.c) * w * dw * libm::pow(1.0 + w * w, 0.25);
        Ok(BranchState { x, u: y[0], w, dw, d2w })
    }

    pub fn mean_curvature(&self, x: f64) -> Result<f64, ProfileError> {
        let s = self.state_at(x)?;
        Ok(s.dw / libm::pow(1.0 + s.w * s.w, 1.5))
    }

    pub fn grad_h_squared(&self, x: f64) -> Result<f64, ProfileError> {
        let s = self.state_at(x)?;
        Ok(grad_expression(s.w, s.dw, s.d2w))
    }
}
