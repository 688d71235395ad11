//! Adaptive Dormand–Prince 8(5,3) integration with 7th-order dense output,
//! sign-change event location and blow-up reporting.
//!
//! A collapsing step size is not an error here: it is how callers learn that
//! the solution left every bounded set in finite time, so it is reported via
//! [`TerminalReason::StepUnderflow`] on an otherwise valid solution.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use super::root::brent;

/// Default magnitude past which the state is treated as having blown up.
pub const DEFAULT_BLOWUP_GUARD: f64 = 1.0e12;

const DEFAULT_MAX_STEPS: usize = 200_000;

type RhsFn<'a> = dyn Fn(f64, &[f64], &mut [f64]) + Send + Sync + 'a;
type EventFn<'a> = dyn Fn(f64, &[f64]) -> f64 + Send + Sync + 'a;
type ProjectionFn<'a> = dyn Fn(&mut [f64]) -> f64 + Send + Sync + 'a;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IvpError {
    #[error("initial state has dimension zero")]
    EmptyState,
    #[error("right-hand side is not finite at the initial point")]
    NonFiniteInitialRhs,
    #[error("tolerances must be positive and finite (rtol = {rtol}, atol = {atol})")]
    InvalidTolerance { rtol: f64, atol: f64 },
    #[error("integration end point must differ from the start point")]
    EmptyInterval,
    #[error("step budget of {0} steps exhausted before reaching the end point")]
    StepBudget(usize),
}

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalReason {
    ReachedEnd,
    /// A terminal event with the given index changed sign.
    EventHit(usize),
    /// The step size collapsed to machine scale or the state crossed the
    /// blow-up guard. The solution is valid up to its last sample.
    StepUnderflow,
}

/// A scalar function whose sign changes are located during integration.
pub struct Event<'a> {
    g: Box<EventFn<'a>>,
    terminal: bool,
}

/// An initial-value problem `y' = f(t, y)`, `y(t0) = y0`.
pub struct IvpProblem<'a> {
    rhs: Box<RhsFn<'a>>,
    t0: f64,
    y0: Vec<f64>,
    events: Vec<Event<'a>>,
    projection: Option<Box<ProjectionFn<'a>>>,
    blowup_guard: f64,
    max_steps: usize,
}

impl<'a> IvpProblem<'a> {
    pub fn new<F>(t0: f64, y0: Vec<f64>, rhs: F) -> Result<Self, IvpError>
    where
        F: Fn(f64, &[f64], &mut [f64]) + Send + Sync + 'a,
    {
        if y0.is_empty() {
            return Err(IvpError::EmptyState);
        }
        let mut probe = vec![0.0; y0.len()];
        rhs(t0, &y0, &mut probe);
        if !t0.is_finite() || y0.iter().chain(probe.iter()).any(|v| !v.is_finite()) {
            return Err(IvpError::NonFiniteInitialRhs);
        }
        Ok(Self {
            rhs: Box::new(rhs),
            t0,
            y0,
            events: Vec::new(),
            projection: None,
            blowup_guard: DEFAULT_BLOWUP_GUARD,
            max_steps: DEFAULT_MAX_STEPS,
        })
    }

    /// Adds an event function. Terminal events halt the integration at their
    /// first sign change; the others are only recorded.
    pub fn with_event<G>(mut self, g: G, terminal: bool) -> Self
    where
        G: Fn(f64, &[f64]) -> f64 + Send + Sync + 'a,
    {
        self.events.push(Event { g: Box::new(g), terminal });
        self
    }

    /// Installs a projection applied to the state after every accepted step.
    /// It returns the size of the correction it made, which is tracked in
    /// [`IvpSolution::max_projection`].
    pub fn with_projection<P>(mut self, p: P) -> Self
    where
        P: Fn(&mut [f64]) -> f64 + Send + Sync + 'a,
    {
        self.projection = Some(Box::new(p));
        self
    }

    pub fn with_blowup_guard(mut self, guard: f64) -> Self {
        self.blowup_guard = guard;
        self
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn dimension(&self) -> usize {
        self.y0.len()
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn y0(&self) -> &[f64] {
        &self.y0
    }

    fn eval(&self, t: f64, y: &[f64], out: &mut [f64]) {
        (self.rhs)(t, y, out)
    }
}

/// A located sign change of an event function.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub index: usize,
    pub t: f64,
    pub y: Vec<f64>,
}

/// Interpolation data for one accepted step.
#[derive(Debug, Clone)]
struct Segment {
    t: f64,
    h: f64,
    /// Eight coefficient blocks of length `dim`.
    cont: Vec<f64>,
}

/// Result of [`integrate`]: accepted step points plus a continuous
/// interpolant over the covered interval.
#[derive(Debug, Clone)]
pub struct IvpSolution {
    dim: usize,
    ts: Vec<f64>,
    ys: Vec<f64>,
    segments: Vec<Segment>,
    pub terminal_reason: TerminalReason,
    pub events: Vec<EventRecord>,
    /// Largest correction applied by the projection, zero without one.
    pub max_projection: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub evaluations: usize,
}

impl IvpSolution {
    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.ts
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.ys[i * self.dim..(i + 1) * self.dim]
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, &[f64])> + '_ {
        self.ts.iter().copied().zip(self.ys.chunks_exact(self.dim))
    }

    pub fn t_first(&self) -> f64 {
        self.ts[0]
    }

    pub fn t_last(&self) -> f64 {
        self.ts[self.ts.len() - 1]
    }

    pub fn y_last(&self) -> &[f64] {
        self.state(self.ts.len() - 1)
    }

    pub fn direction(&self) -> f64 {
        if self.t_last() >= self.t_first() {
            1.0
        } else {
            -1.0
        }
    }

    pub fn covers(&self, t: f64) -> bool {
        let (a, b) = (self.t_first(), self.t_last());
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        t >= lo && t <= hi
    }

    fn segment_index(&self, t: f64) -> usize {
        let dir = self.direction();
        let key = dir * t;
        // first segment whose start lies beyond t, minus one
        let idx = self.segments.partition_point(|s| dir * s.t <= key);
        idx.saturating_sub(1).min(self.segments.len() - 1)
    }

    /// Interpolated state at `t`, or `None` outside the covered interval.
    pub fn dense_eval(&self, t: f64) -> Option<Vec<f64>> {
        let mut out = vec![0.0; self.dim];
        self.dense_eval_into(t, &mut out).then_some(out)
    }

    pub fn dense_eval_into(&self, t: f64, out: &mut [f64]) -> bool {
        if !self.covers(t) {
            return false;
        }
        if self.segments.is_empty() {
            out.copy_from_slice(self.state(0));
            return true;
        }
        let seg = &self.segments[self.segment_index(t)];
        let s = (t - seg.t) / seg.h;
        let s1 = 1.0 - s;
        let n = self.dim;
        let c = &seg.cont;
        for i in 0..n {
            let conpar = c[4 * n + i] + s * (c[5 * n + i] + s1 * (c[6 * n + i] + s * c[7 * n + i]));
            out[i] = c[i] + s * (c[n + i] + s1 * (c[2 * n + i] + s * (c[3 * n + i] + s1 * conpar)));
        }
        true
    }

    /// Time derivative of the interpolant at `t`.
    pub fn dense_derivative(&self, t: f64) -> Option<Vec<f64>> {
        if !self.covers(t) || self.segments.is_empty() {
            return None;
        }
        let seg = &self.segments[self.segment_index(t)];
        let s = (t - seg.t) / seg.h;
        let s1 = 1.0 - s;
        let n = self.dim;
        let c = &seg.cont;
        let mut out = vec![0.0; n];
        for (i, o) in out.iter_mut().enumerate() {
            let b = |j: usize| c[j * n + i];
            // y = b0 + s(b1 + s1(b2 + s(b3 + s1(b4 + s(b5 + s1(b6 + s b7))))))
            let r = b(6) + s * b(7);
            let dr = b(7);
            let q = b(5) + s1 * r;
            let dq = -r + s1 * dr;
            let p = b(4) + s * q;
            let dp = q + s * dq;
            let d = b(3) + s1 * p;
            let dd = -p + s1 * dp;
            let e = b(2) + s * d;
            let de = d + s * dd;
            let a = b(1) + s1 * e;
            let da = -e + s1 * de;
            *o = (a + s * da) / seg.h;
        }
        Some(out)
    }
}

/// Integrates `problem` from its initial point to `t_end`.
///
/// The local error of every accepted step satisfies the mixed criterion
/// `|err_i| <= atol + rtol * max(|y_i|, |y_i_new|)` in the RMS sense.
pub fn integrate(problem: &IvpProblem<'_>, t_end: f64, rtol: f64, atol: f64) -> Result<IvpSolution, IvpError> {
    if !(rtol > 0.0 && atol > 0.0 && rtol.is_finite() && atol.is_finite()) {
        return Err(IvpError::InvalidTolerance { rtol, atol });
    }
    if !t_end.is_finite() || t_end == problem.t0 {
        return Err(IvpError::EmptyInterval);
    }
    Dop853::new(problem, t_end, rtol, atol).run()
}

struct Dop853<'p, 'a> {
    p: &'p IvpProblem<'a>,
    n: usize,
    t_end: f64,
    rtol: f64,
    atol: f64,
}

impl<'p, 'a> Dop853<'p, 'a> {
    fn new(p: &'p IvpProblem<'a>, t_end: f64, rtol: f64, atol: f64) -> Self {
        Self { p, n: p.dimension(), t_end, rtol, atol }
    }

    fn initial_step(&self, t: f64, y: &[f64], f0: &[f64], dir: f64, hmax: f64) -> f64 {
        let n = self.n;
        let mut dnf = 0.0;
        let mut dny = 0.0;
        for i in 0..n {
            let sk = self.atol + self.rtol * libm::fabs(y[i]);
            dnf += (f0[i] / sk) * (f0[i] / sk);
            dny += (y[i] / sk) * (y[i] / sk);
        }
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1.0e-6 } else { libm::sqrt(dny / dnf) * 0.01 };
        h = h.min(hmax);
        let y1: Vec<f64> = (0..n).map(|i| y[i] + dir * h * f0[i]).collect();
        let mut f1 = vec![0.0; n];
        self.p.eval(t + dir * h, &y1, &mut f1);
        let mut der2 = 0.0;
        for i in 0..n {
            let sk = self.atol + self.rtol * libm::fabs(y[i]);
            der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
        }
        let der2 = libm::sqrt(der2) / h;
        let der12 = der2.max(libm::sqrt(dnf));
        let h1 = if !der12.is_finite() {
            h * 1e-3
        } else if der12 <= 1e-15 {
            (1.0e-6f64).max(h * 1e-3)
        } else {
            libm::pow(0.01 / der12, 1.0 / 8.0)
        };
        (100.0 * h).min(h1).min(hmax)
    }

    fn run(self) -> Result<IvpSolution, IvpError> {
        let n = self.n;
        let p = self.p;
        let dir = if self.t_end > p.t0 { 1.0 } else { -1.0 };
        let hmax = libm::fabs(self.t_end - p.t0);

        let mut t = p.t0;
        let mut y = p.y0.clone();
        let mut k1 = vec![0.0; n];
        p.eval(t, &y, &mut k1);
        let mut evaluations = 1usize;

        let mut sol = IvpSolution {
            dim: n,
            ts: vec![t],
            ys: y.clone(),
            segments: Vec::new(),
            terminal_reason: TerminalReason::ReachedEnd,
            events: Vec::new(),
            max_projection: 0.0,
            accepted_steps: 0,
            rejected_steps: 0,
            evaluations: 0,
        };

        let mut g_old: Vec<f64> = p.events.iter().map(|e| (e.g)(t, &y)).collect();

        let mut h = self.initial_step(t, &y, &k1, dir, hmax) * dir;
        evaluations += 1;

        let mut k = [(); 12].map(|_| vec![0.0; n]);
        let mut ytmp = vec![0.0; n];
        let mut y_new = vec![0.0; n];
        let mut k_new = vec![0.0; n];
        let mut last_rejected = false;
        let mut steps = 0usize;

        loop {
            if steps >= p.max_steps {
                return Err(IvpError::StepBudget(p.max_steps));
            }
            let remaining = self.t_end - t;
            if dir * remaining <= 0.0 {
                break;
            }
            if libm::fabs(h) <= 10.0 * f64::EPSILON * libm::fabs(t) || t + h == t {
                sol.terminal_reason = TerminalReason::StepUnderflow;
                break;
            }
            let mut last = false;
            if dir * (t + h - self.t_end) >= 0.0 {
                h = remaining;
                last = true;
            } else {
                // make t + h exact so the interpolant ends on the stored point
                h = (t + h) - t;
            }
            steps += 1;

            self.stages(t, h, &y, &k1, &mut k, &mut ytmp, &mut y_new);
            evaluations += 11;

            // error estimate (Hairer's combined 5th/3rd order norm)
            let mut err = 0.0;
            let mut err2 = 0.0;
            let mut finite = true;
            for i in 0..n {
                let sk = self.atol + self.rtol * libm::fabs(y[i]).max(libm::fabs(y_new[i]));
                // k[3] holds the weighted increment, k[11] the 12th stage
                let e2 = k[3][i] - BHH1 * k1[i] - BHH2 * k[8][i] - BHH3 * k[11][i];
                err2 += (e2 / sk) * (e2 / sk);
                let e = ER1 * k1[i]
                    + ER6 * k[5][i]
                    + ER7 * k[6][i]
                    + ER8 * k[7][i]
                    + ER9 * k[8][i]
                    + ER10 * k[9][i]
                    + ER11 * k[10][i]
                    + ER12 * k[11][i];
                err += (e / sk) * (e / sk);
                if !y_new[i].is_finite() {
                    finite = false;
                }
            }
            let mut deno = err + 0.01 * err2;
            if deno <= 0.0 {
                deno = 1.0;
            }
            let mut err = libm::fabs(h) * err * libm::sqrt(1.0 / (deno * n as f64));
            if !finite || !err.is_finite() {
                err = f64::INFINITY;
            }

            let fac11 = libm::pow(err, 1.0 / 8.0);
            let fac = (1.0 / 6.0f64).max((1.0 / 0.333f64).min(fac11 / 0.9));
            if err <= 1.0 {
                let t_new = if last { self.t_end } else { t + h };
                p.eval(t_new, &y_new, &mut k_new);
                evaluations += 1;

                let cont = self.dense_coefficients(t, h, &y, &y_new, &k1, &k_new, &mut k, &mut ytmp);
                evaluations += 3;
                let seg = Segment { t, h, cont };

                // events
                let mut hit: Option<(usize, f64)> = None;
                let mut recorded: Vec<EventRecord> = Vec::new();
                for (i, ev) in p.events.iter().enumerate() {
                    let g_new = (ev.g)(t_new, &y_new);
                    let g0 = g_old[i];
                    let crossed = (g0 < 0.0 && g_new >= 0.0) || (g0 > 0.0 && g_new <= 0.0);
                    if crossed {
                        let te = locate_event(&seg, n, &ev.g, t, t_new, g0, g_new);
                        let mut ye = vec![0.0; n];
                        interpolate(&seg, n, te, &mut ye);
                        if ev.terminal {
                            if hit.is_none_or(|(_, th)| dir * te < dir * th) {
                                hit = Some((i, te));
                            }
                        }
                        recorded.push(EventRecord { index: i, t: te, y: ye });
                    }
                    g_old[i] = g_new;
                }
                sol.segments.push(seg);
                sol.accepted_steps += 1;

                if let Some((idx, te)) = hit {
                    recorded.retain(|r| dir * r.t <= dir * te);
                    recorded.sort_by(|a, b| (dir * a.t).total_cmp(&(dir * b.t)));
                    let ye = recorded
                        .iter()
                        .find(|r| r.index == idx && r.t == te)
                        .map(|r| r.y.clone())
                        .unwrap_or_else(|| y_new.clone());
                    sol.events.extend(recorded);
                    if te != t {
                        sol.ts.push(te);
                        sol.ys.extend_from_slice(&ye);
                    }
                    sol.terminal_reason = TerminalReason::EventHit(idx);
                    break;
                }
                recorded.sort_by(|a, b| (dir * a.t).total_cmp(&(dir * b.t)));
                sol.events.extend(recorded);

                t = t_new;
                y.copy_from_slice(&y_new);
                if let Some(proj) = &p.projection {
                    let c = proj(&mut y);
                    sol.max_projection = sol.max_projection.max(c);
                    p.eval(t, &y, &mut k1);
                    evaluations += 1;
                } else {
                    k1.copy_from_slice(&k_new);
                }
                sol.ts.push(t);
                sol.ys.extend_from_slice(&y);

                if y.iter().any(|v| !v.is_finite() || libm::fabs(*v) > p.blowup_guard) {
                    sol.terminal_reason = TerminalReason::StepUnderflow;
                    break;
                }
                if last {
                    break;
                }
                let mut h_new = h / fac;
                if last_rejected {
                    h_new = if dir > 0.0 { h_new.min(h) } else { h_new.max(h) };
                }
                last_rejected = false;
                h = if libm::fabs(h_new) > hmax { dir * hmax } else { h_new };
            } else {
                let shrink = if err.is_finite() { (1.0 / 0.333f64).min(fac11 / 0.9) } else { 10.0 };
                h /= shrink;
                last_rejected = true;
                sol.rejected_steps += 1;
            }
        }
        sol.evaluations = evaluations;
        Ok(sol)
    }

    #[allow(clippy::too_many_arguments)]
    fn stages(
        &self,
        t: f64,
        h: f64,
        y: &[f64],
        k1: &[f64],
        k: &mut [Vec<f64>; 12],
        ytmp: &mut [f64],
        y_new: &mut [f64],
    ) {
        let n = self.n;
        let p = self.p;
        // k[j] holds stage j+1 for j >= 1; k[0] is unused (k1 is passed in)
        macro_rules! stage {
            ($dst:expr, $c:expr, [$(($a:expr, $src:expr)),*]) => {{
                for i in 0..n {
                    ytmp[i] = y[i] + h * (0.0 $(+ $a * $src[i])*);
                }
                let mut out = core::mem::take(&mut k[$dst]);
                p.eval(t + $c * h, ytmp, &mut out);
                k[$dst] = out;
            }};
        }
        stage!(1, C2, [(A21, k1)]);
        stage!(2, C3, [(A31, k1), (A32, k[1])]);
        stage!(3, C4, [(A41, k1), (A43, k[2])]);
        stage!(4, C5, [(A51, k1), (A53, k[2]), (A54, k[3])]);
        stage!(5, C6, [(A61, k1), (A64, k[3]), (A65, k[4])]);
        stage!(6, C7, [(A71, k1), (A74, k[3]), (A75, k[4]), (A76, k[5])]);
        stage!(7, C8, [(A81, k1), (A84, k[3]), (A85, k[4]), (A86, k[5]), (A87, k[6])]);
        stage!(8, C9, [(A91, k1), (A94, k[3]), (A95, k[4]), (A96, k[5]), (A97, k[6]), (A98, k[7])]);
        stage!(
            9,
            C10,
            [(A101, k1), (A104, k[3]), (A105, k[4]), (A106, k[5]), (A107, k[6]), (A108, k[7]), (A109, k[8])]
        );
        stage!(
            10,
            C11,
            [
                (A111, k1),
                (A114, k[3]),
                (A115, k[4]),
                (A116, k[5]),
                (A117, k[6]),
                (A118, k[7]),
                (A119, k[8]),
                (A1110, k[9])
            ]
        );
        stage!(
            11,
            1.0,
            [
                (A121, k1),
                (A124, k[3]),
                (A125, k[4]),
                (A126, k[5]),
                (A127, k[6]),
                (A128, k[7]),
                (A129, k[8]),
                (A1210, k[9]),
                (A1211, k[10])
            ]
        );
        // Stage 4 is no longer needed: reuse its slot for the weighted sum.
        for i in 0..n {
            let inc = B1 * k1[i]
                + B6 * k[5][i]
                + B7 * k[6][i]
                + B8 * k[7][i]
                + B9 * k[8][i]
                + B10 * k[9][i]
                + B11 * k[10][i]
                + B12 * k[11][i];
            k[3][i] = inc;
            y_new[i] = y[i] + h * inc;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn dense_coefficients(
        &self,
        t: f64,
        h: f64,
        y: &[f64],
        y_new: &[f64],
        k1: &[f64],
        k_new: &[f64],
        k: &mut [Vec<f64>; 12],
        ytmp: &mut [f64],
    ) -> Vec<f64> {
        let n = self.n;
        let p = self.p;
        let mut cont = vec![0.0; 8 * n];
        for i in 0..n {
            let ydiff = y_new[i] - y[i];
            let bspl = h * k1[i] - ydiff;
            cont[i] = y[i];
            cont[n + i] = ydiff;
            cont[2 * n + i] = bspl;
            cont[3 * n + i] = ydiff - h * k_new[i] - bspl;
            cont[4 * n + i] = D41 * k1[i]
                + D46 * k[5][i]
                + D47 * k[6][i]
                + D48 * k[7][i]
                + D49 * k[8][i]
                + D410 * k[9][i]
                + D411 * k[10][i]
                + D412 * k[11][i];
            cont[5 * n + i] = D51 * k1[i]
                + D56 * k[5][i]
                + D57 * k[6][i]
                + D58 * k[7][i]
                + D59 * k[8][i]
                + D510 * k[9][i]
                + D511 * k[10][i]
                + D512 * k[11][i];
            cont[6 * n + i] = D61 * k1[i]
                + D66 * k[5][i]
                + D67 * k[6][i]
                + D68 * k[7][i]
                + D69 * k[8][i]
                + D610 * k[9][i]
                + D611 * k[10][i]
                + D612 * k[11][i];
            cont[7 * n + i] = D71 * k1[i]
                + D76 * k[5][i]
                + D77 * k[6][i]
                + D78 * k[7][i]
                + D79 * k[8][i]
                + D710 * k[9][i]
                + D711 * k[10][i]
                + D712 * k[11][i];
        }
        // three extra stages: slots 1, 2, 4 are free by now
        for i in 0..n {
            ytmp[i] = y[i]
                + h * (A141 * k1[i]
                    + A147 * k[6][i]
                    + A148 * k[7][i]
                    + A149 * k[8][i]
                    + A1410 * k[9][i]
                    + A1411 * k[10][i]
                    + A1412 * k[11][i]
                    + A1413 * k_new[i]);
        }
        let mut k14 = core::mem::take(&mut k[1]);
        p.eval(t + C14 * h, ytmp, &mut k14);
        for i in 0..n {
            ytmp[i] = y[i]
                + h * (A151 * k1[i]
                    + A156 * k[5][i]
                    + A157 * k[6][i]
                    + A158 * k[7][i]
                    + A1511 * k[10][i]
                    + A1512 * k[11][i]
                    + A1513 * k_new[i]
                    + A1514 * k14[i]);
        }
        let mut k15 = core::mem::take(&mut k[2]);
        p.eval(t + C15 * h, ytmp, &mut k15);
        for i in 0..n {
            ytmp[i] = y[i]
                + h * (A161 * k1[i]
                    + A166 * k[5][i]
                    + A167 * k[6][i]
                    + A168 * k[7][i]
                    + A169 * k[8][i]
                    + A1613 * k_new[i]
                    + A1614 * k14[i]
                    + A1615 * k15[i]);
        }
        let mut k16 = core::mem::take(&mut k[4]);
        p.eval(t + C16 * h, ytmp, &mut k16);
        for i in 0..n {
            cont[4 * n + i] = h * (cont[4 * n + i] + D413 * k_new[i] + D414 * k14[i] + D415 * k15[i] + D416 * k16[i]);
            cont[5 * n + i] = h * (cont[5 * n + i] + D513 * k_new[i] + D514 * k14[i] + D515 * k15[i] + D516 * k16[i]);
            cont[6 * n + i] = h * (cont[6 * n + i] + D613 * k_new[i] + D614 * k14[i] + D615 * k15[i] + D616 * k16[i]);
            cont[7 * n + i] = h * (cont[7 * n + i] + D713 * k_new[i] + D714 * k14[i] + D715 * k15[i] + D716 * k16[i]);
        }
        k[1] = k14;
        k[2] = k15;
        k[4] = k16;
        cont
    }
}

fn interpolate(seg: &Segment, n: usize, t: f64, out: &mut [f64]) {
    let s = (t - seg.t) / seg.h;
    let s1 = 1.0 - s;
    let c = &seg.cont;
    for i in 0..n {
        let conpar = c[4 * n + i] + s * (c[5 * n + i] + s1 * (c[6 * n + i] + s * c[7 * n + i]));
        out[i] = c[i] + s * (c[n + i] + s1 * (c[2 * n + i] + s * (c[3 * n + i] + s1 * conpar)));
    }
}

#[allow(clippy::too_many_arguments)]
fn locate_event(seg: &Segment, n: usize, g: &EventFn<'_>, t0: f64, t1: f64, g0: f64, g1: f64) -> f64 {
    if g1 == 0.0 {
        return t1;
    }
    let mut buf = vec![0.0; n];
    let f = |t: f64| {
        interpolate(seg, n, t, &mut buf);
        g(t, &buf)
    };
    let tol = 4.0 * f64::EPSILON * libm::fabs(t0).max(libm::fabs(t1)).max(1e-300);
    let (lo, hi, flo, fhi) = if t0 <= t1 { (t0, t1, g0, g1) } else { (t1, t0, g1, g0) };
    brent(f, lo, hi, flo, fhi, tol, 200)
}

// Dormand–Prince 8(5,3) coefficients (Hairer, Nørsett & Wanner, DOP853).
const C2: f64 = 0.526001519587677318785587544488E-01;
const C3: f64 = 0.789002279381515978178381316732E-01;
const C4: f64 = 0.118350341907227396726757197510E+00;
const C5: f64 = 0.281649658092772603273242802490E+00;
const C6: f64 = 0.333333333333333333333333333333E+00;
const C7: f64 = 0.25E+00;
const C8: f64 = 0.307692307692307692307692307692E+00;
const C9: f64 = 0.651282051282051282051282051282E+00;
const C10: f64 = 0.6E+00;
const C11: f64 = 0.857142857142857142857142857142E+00;
const C14: f64 = 0.1E+00;
const C15: f64 = 0.2E+00;
const C16: f64 = 0.777777777777777777777777777778E+00;

const A21: f64 = 5.26001519587677318785587544488E-2;
const A31: f64 = 1.97250569845378994544595329183E-2;
const A32: f64 = 5.91751709536136983633785987549E-2;
const A41: f64 = 2.95875854768068491816892993775E-2;
const A43: f64 = 8.87627564304205475450678981324E-2;
const A51: f64 = 2.41365134159266685502369798665E-1;
const A53: f64 = -8.84549479328286085344864962717E-1;
const A54: f64 = 9.24834003261792003115737966543E-1;
const A61: f64 = 3.7037037037037037037037037037E-2;
const A64: f64 = 1.70828608729473871279604482173E-1;
const A65: f64 = 1.25467687566822425016691814123E-1;
const A71: f64 = 3.7109375E-2;
const A74: f64 = 1.70252211019544039314978060272E-1;
const A75: f64 = 6.02165389804559606850219397283E-2;
const A76: f64 = -1.7578125E-2;
const A81: f64 = 3.70920001185047927108779319836E-2;
const A84: f64 = 1.70383925712239993810214054705E-1;
const A85: f64 = 1.07262030446373284651809199168E-1;
const A86: f64 = -1.53194377486244017527936158236E-2;
const A87: f64 = 8.27378916381402288758473766002E-3;
const A91: f64 = 6.24110958716075717114429577812E-1;
const A94: f64 = -3.36089262944694129406857109825E0;
const A95: f64 = -8.68219346841726006818189891453E-1;
const A96: f64 = 2.75920996994467083049415600797E1;
const A97: f64 = 2.01540675504778934086186788979E1;
const A98: f64 = -4.34898841810699588477366255144E1;
const A101: f64 = 4.77662536438264365890433908527E-1;
const A104: f64 = -2.48811461997166764192642586468E0;
const A105: f64 = -5.90290826836842996371446475743E-1;
const A106: f64 = 2.12300514481811942347288949897E1;
const A107: f64 = 1.52792336328824235832596922938E1;
const A108: f64 = -3.32882109689848629194453265587E1;
const A109: f64 = -2.03312017085086261358222928593E-2;
const A111: f64 = -9.3714243008598732571704021658E-1;
const A114: f64 = 5.18637242884406370830023853209E0;
const A115: f64 = 1.09143734899672957818500254654E0;
const A116: f64 = -8.14978701074692612513997267357E0;
const A117: f64 = -1.85200656599969598641566180701E1;
const A118: f64 = 2.27394870993505042818970056734E1;
const A119: f64 = 2.49360555267965238987089396762E0;
const A1110: f64 = -3.0467644718982195003823669022E0;
const A121: f64 = 2.27331014751653820792359768449E0;
const A124: f64 = -1.05344954667372501984066689879E1;
const A125: f64 = -2.00087205822486249909675718444E0;
const A126: f64 = -1.79589318631187989172765950534E1;
const A127: f64 = 2.79488845294199600508499808837E1;
const A128: f64 = -2.85899827713502369474065508674E0;
const A129: f64 = -8.87285693353062954433549289258E0;
const A1210: f64 = 1.23605671757943030647266201528E1;
const A1211: f64 = 6.43392746015763530355970484046E-1;

const A141: f64 = 5.61675022830479523392909219681E-2;
const A147: f64 = 2.53500210216624811088794765333E-1;
const A148: f64 = -2.46239037470802489917441475441E-1;
const A149: f64 = -1.24191423263816360469010140626E-1;
const A1410: f64 = 1.5329179827876569731206322685E-1;
const A1411: f64 = 8.20105229563468988491666602057E-3;
const A1412: f64 = 7.56789766054569976138603589584E-3;
const A1413: f64 = -8.298E-3;
const A151: f64 = 3.18346481635021405060768473261E-2;
const A156: f64 = 2.83009096723667755288322961402E-2;
const A157: f64 = 5.35419883074385676223797384372E-2;
const A158: f64 = -5.49237485713909884646569340306E-2;
const A1511: f64 = -1.08347328697249322858509316994E-4;
const A1512: f64 = 3.82571090835658412954920192323E-4;
const A1513: f64 = -3.40465008687404560802977114492E-4;
const A1514: f64 = 1.41312443674632500278074618366E-1;
const A161: f64 = -4.28896301583791923408573538692E-1;
const A166: f64 = -4.69762141536116384314449447206E0;
const A167: f64 = 7.68342119606259904184240953878E0;
const A168: f64 = 4.06898981839711007970213554331E0;
const A169: f64 = 3.56727187455281109270669543021E-1;
const A1613: f64 = -1.39902416515901462129418009734E-3;
const A1614: f64 = 2.9475147891527723389556272149E0;
const A1615: f64 = -9.15095847217987001081870187138E0;

const B1: f64 = 5.42937341165687622380535766363E-2;
const B6: f64 = 4.45031289275240888144113950566E0;
const B7: f64 = 1.89151789931450038304281599044E0;
const B8: f64 = -5.8012039600105847814672114227E0;
const B9: f64 = 3.1116436695781989440891606237E-1;
const B10: f64 = -1.52160949662516078556178806805E-1;
const B11: f64 = 2.01365400804030348374776537501E-1;
const B12: f64 = 4.47106157277725905176885569043E-2;

const BHH1: f64 = 0.244094488188976377952755905512E+00;
const BHH2: f64 = 0.733846688281611857341361741547E+00;
const BHH3: f64 = 0.220588235294117647058823529412E-01;

const ER1: f64 = 0.1312004499419488073250102996E-01;
const ER6: f64 = -0.1225156446376204440720569753E+01;
const ER7: f64 = -0.4957589496572501915214079952E+00;
const ER8: f64 = 0.1664377182454986536961530415E+01;
const ER9: f64 = -0.3503288487499736816886487290E+00;
const ER10: f64 = 0.3341791187130174790297318841E+00;
const ER11: f64 = 0.8192320648511571246570742613E-01;
const ER12: f64 = -0.2235530786388629525884427845E-01;

const D41: f64 = -0.84289382761090128651353491142E+01;
const D46: f64 = 0.56671495351937776962531783590E+00;
const D47: f64 = -0.30689499459498916912797304727E+01;
const D48: f64 = 0.23846676565120698287728149680E+01;
const D49: f64 = 0.21170345824450282767155149946E+01;
const D410: f64 = -0.87139158377797299206789907490E+00;
const D411: f64 = 0.22404374302607882758541771650E+01;
const D412: f64 = 0.63157877876946881815570249290E+00;
const D413: f64 = -0.88990336451333310820698117400E-01;
const D414: f64 = 0.18148505520854727256656404962E+02;
const D415: f64 = -0.91946323924783554000451984436E+01;
const D416: f64 = -0.44360363875948939664310572000E+01;
const D51: f64 = 0.10427508642579134603413151009E+02;
const D56: f64 = 0.24228349177525818288430175319E+03;
const D57: f64 = 0.16520045171727028198505394887E+03;
const D58: f64 = -0.37454675472269020279518312152E+03;
const D59: f64 = -0.22113666853125306036270938578E+02;
const D510: f64 = 0.77334326684722638389603898808E+01;
const D511: f64 = -0.30674084731089398182061213626E+02;
const D512: f64 = -0.93321305264302278729567221706E+01;
const D513: f64 = 0.15697238121770843886131091075E+02;
const D514: f64 = -0.31139403219565177677282850411E+02;
const D515: f64 = -0.93529243588444783865713862664E+01;
const D516: f64 = 0.35816841486394083752465898540E+02;
const D61: f64 = 0.19985053242002433820987653617E+02;
const D66: f64 = -0.38703730874935176555105901742E+03;
const D67: f64 = -0.18917813819516756882830838328E+03;
const D68: f64 = 0.52780815920542364900561016686E+03;
const D69: f64 = -0.11573902539959630126141871134E+02;
const D610: f64 = 0.68812326946963000169666922661E+01;
const D611: f64 = -0.10006050966910838403183860980E+01;
const D612: f64 = 0.77771377980534432092869265740E+00;
const D613: f64 = -0.27782057523535084065932004339E+01;
const D614: f64 = -0.60196695231264120758267380846E+02;
const D615: f64 = 0.84320405506677161018159903784E+02;
const D616: f64 = 0.11992291136182789328035130030E+02;
const D71: f64 = -0.25693933462703749003312586129E+02;
const D76: f64 = -0.15418974869023643374053993627E+03;
const D77: f64 = -0.23152937917604549567536039109E+03;
const D78: f64 = 0.35763911791061412378285349910E+03;
const D79: f64 = 0.93405324183624310003907691704E+02;
const D710: f64 = -0.37458323136451633156875139351E+02;
const D711: f64 = 0.10409964950896230045147246184E+03;
const D712: f64 = 0.29840293426660503123344363579E+02;
const D713: f64 = -0.43533456590011143754432175058E+02;
const D714: f64 = 0.96324553959188282948394950600E+02;
const D715: f64 = -0.39177261675615439165231486172E+02;
const D716: f64 = -0.14972683625798562581422125276E+03;

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar<'a>(y0: f64, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'a) -> IvpProblem<'a> {
        IvpProblem::new(0.0, vec![y0], move |t, y, out| out[0] = f(t, y[0])).unwrap()
    }

    #[test]
    fn zero_rhs_keeps_constant() {
        let sol = integrate(&scalar(3.0, |_, _| 0.0), 1.0, 1e-10, 1e-12).unwrap();
        assert_eq!(sol.terminal_reason, TerminalReason::ReachedEnd);
        assert_eq!(sol.t_last(), 1.0);
        assert_eq!(sol.y_last()[0], 3.0);
    }

    #[test]
    fn exponential_growth() {
        let sol = integrate(&scalar(1.0, |_, y| y), 1.0, 1e-10, 1e-12).unwrap();
        assert!((sol.y_last()[0] - core::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn backward_integration() {
        let sol = integrate(&scalar(1.0, |_, y| y), -1.0, 1e-11, 1e-13).unwrap();
        assert!((sol.y_last()[0] - libm::exp(-1.0)).abs() < 1e-10);
        let mid = sol.dense_eval(-0.5).unwrap()[0];
        assert!((mid - libm::exp(-0.5)).abs() < 1e-9);
    }

    #[test]
    fn blow_up_reports_step_underflow() {
        let sol = integrate(&scalar(1.0, |_, y| y * y), 2.0, 1e-10, 1e-12).unwrap();
        assert_eq!(sol.terminal_reason, TerminalReason::StepUnderflow);
        assert!((sol.t_last() - 1.0).abs() < 1e-6, "stopped at {}", sol.t_last());
    }

    #[test]
    fn terminal_event_located() {
        let p = scalar(1.0, |_, _| -1.0).with_event(|_, y| y[0], true);
        let sol = integrate(&p, 5.0, 1e-10, 1e-12).unwrap();
        assert_eq!(sol.terminal_reason, TerminalReason::EventHit(0));
        assert!((sol.t_last() - 1.0).abs() < 1e-12);
        assert_eq!(sol.events.len(), 1);
    }

    #[test]
    fn non_terminal_events_are_recorded() {
        let p = IvpProblem::new(0.0, vec![0.0, 1.0], |_, y, o| {
            o[0] = y[1];
            o[1] = -y[0];
        })
        .unwrap()
        .with_event(|_, y| y[0], false);
        let sol = integrate(&p, 10.0, 1e-11, 1e-13).unwrap();
        assert_eq!(sol.terminal_reason, TerminalReason::ReachedEnd);
        // sin t crosses zero at pi, 2pi, 3pi (t = 0 itself is the start)
        let ts: Vec<f64> = sol.events.iter().map(|e| e.t).collect();
        assert_eq!(ts.len(), 3, "{ts:?}");
        for (k, t) in ts.iter().enumerate() {
            assert!((t - (k + 1) as f64 * core::f64::consts::PI).abs() < 1e-9);
        }
    }

    #[test]
    fn dense_output_matches_samples_and_derivative() {
        let p = IvpProblem::new(0.0, vec![0.0, 1.0], |_, y, o| {
            o[0] = y[1];
            o[1] = -y[0];
        })
        .unwrap();
        let sol = integrate(&p, 6.0, 1e-12, 1e-14).unwrap();
        for (t, y) in sol.samples() {
            let d = sol.dense_eval(t).unwrap();
            assert!((d[0] - y[0]).abs() < 1e-13 && (d[1] - y[1]).abs() < 1e-13);
        }
        for i in 0..=60 {
            let t = i as f64 * 0.1;
            let y = sol.dense_eval(t).unwrap();
            let dy = sol.dense_derivative(t).unwrap();
            assert!((y[0] - libm::sin(t)).abs() < 1e-10);
            assert!((dy[0] - libm::cos(t)).abs() < 1e-8);
            assert!((dy[1] + libm::sin(t)).abs() < 1e-8);
        }
        assert!(sol.dense_eval(6.5).is_none());
    }

    #[test]
    fn sample_times_strictly_monotone() {
        let sol = integrate(&scalar(1.0, |_, y| y * y), 2.0, 1e-8, 1e-10).unwrap();
        assert!(sol.times().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn projection_is_applied_and_tracked() {
        // rotation on the unit circle, projected back after each step
        let p = IvpProblem::new(0.0, vec![1.0, 0.0], |_, y, o| {
            o[0] = -y[1];
            o[1] = y[0];
        })
        .unwrap()
        .with_projection(|y| {
            let r = libm::hypot(y[0], y[1]);
            y[0] /= r;
            y[1] /= r;
            libm::fabs(r - 1.0)
        });
        let sol = integrate(&p, 20.0, 1e-6, 1e-8).unwrap();
        for (_, y) in sol.samples() {
            assert!((libm::hypot(y[0], y[1]) - 1.0).abs() < 1e-15);
        }
        assert!(sol.max_projection > 0.0 && sol.max_projection < 1e-5);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(matches!(IvpProblem::new(0.0, vec![], |_, _, _| {}), Err(IvpError::EmptyState)));
        assert!(matches!(
            IvpProblem::new(0.0, vec![1.0], |_, _, o| o[0] = f64::NAN),
            Err(IvpError::NonFiniteInitialRhs)
        ));
        let p = scalar(1.0, |_, y| y);
        assert!(matches!(integrate(&p, 0.0, 1e-8, 1e-8), Err(IvpError::EmptyInterval)));
        assert!(matches!(integrate(&p, 1.0, 0.0, 1e-8), Err(IvpError::InvalidTolerance { .. })));
    }
}
