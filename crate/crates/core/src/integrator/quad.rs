//! Adaptive Gauss–Kronrod quadrature for improper integrals.
//!
//! Endpoint singularities of inverse-square-root type are removed with the
//! substitution `t = a + q²` (or `t = b - q²`), an infinite upper limit with
//! `t = c + 1/q² - 1`. The transformed integrands are then smooth and are
//! handled by a global adaptive 7/15-point Gauss–Kronrod rule.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

/// Which finite endpoints carry an integrable singularity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SingularEnds {
    pub lower: bool,
    pub upper: bool,
}

impl SingularEnds {
    pub const NONE: Self = Self { lower: false, upper: false };
    pub const LOWER: Self = Self { lower: true, upper: false };
    pub const UPPER: Self = Self { lower: false, upper: true };
    pub const BOTH: Self = Self { lower: true, upper: true };
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("invalid integration interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("relative tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("integrand is not finite at t = {at}")]
    NonFinite { at: f64 },
    #[error("no convergence within budget: partial value {partial}, error estimate {error_estimate}")]
    NotConverged { partial: f64, error_estimate: f64 },
}

/// Maximum number of subintervals kept alive across all pieces.
pub const MAX_SUBINTERVALS: usize = 4000;

/// Integral of `f` over `(a, b)`, where `b` may be `f64::INFINITY`.
///
/// The result is accurate to `rtol` relative to its magnitude, or to a
/// roundoff floor when the integral is close to zero.
pub fn quad_improper<F>(f: F, a: f64, b: f64, singular_ends: SingularEnds, rtol: f64) -> Result<f64, QuadError>
where
    F: Fn(f64) -> f64,
{
    if !(rtol > 0.0 && rtol.is_finite()) {
        return Err(QuadError::InvalidTolerance(rtol));
    }
    if !a.is_finite() || b.is_nan() || b <= a || b == f64::NEG_INFINITY {
        return Err(QuadError::InvalidInterval { a, b });
    }
    let mut pieces: Vec<Piece> = Vec::with_capacity(3);
    if b == f64::INFINITY {
        if singular_ends.upper {
            return Err(QuadError::InvalidInterval { a, b });
        }
        pieces.push(finite_piece(a, a + 1.0, singular_ends.lower, false));
        pieces.push(Piece { kind: Kind::Tail { c: a + 1.0 }, lo: 0.0, hi: 1.0 });
    } else {
        match (singular_ends.lower, singular_ends.upper) {
            (true, true) => {
                let m = 0.5 * (a + b);
                pieces.push(finite_piece(a, m, true, false));
                pieces.push(finite_piece(m, b, false, true));
            }
            (lo, hi) => pieces.push(finite_piece(a, b, lo, hi)),
        }
    }
    adaptive(&f, &pieces, rtol)
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Plain,
    /// t = a + q²
    Lower {
        a: f64,
    },
    /// t = b - q²
    Upper {
        b: f64,
    },
    /// t = c - 1 + 1/q², q in (0, 1]
    Tail {
        c: f64,
    },
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    kind: Kind,
    lo: f64,
    hi: f64,
}

fn finite_piece(a: f64, b: f64, lower: bool, upper: bool) -> Piece {
    let len = libm::sqrt(b - a);
    match (lower, upper) {
        (true, _) => Piece { kind: Kind::Lower { a }, lo: 0.0, hi: len },
        (false, true) => Piece { kind: Kind::Upper { b }, lo: 0.0, hi: len },
        (false, false) => Piece { kind: Kind::Plain, lo: a, hi: b },
    }
}

impl Kind {
    /// Transformed integrand at q; also returns the original abscissa.
    fn eval<F: Fn(f64) -> f64>(self, f: &F, q: f64) -> (f64, f64) {
        match self {
            Kind::Plain => (f(q), q),
            Kind::Lower { a } => {
                let t = a + q * q;
                (2.0 * q * f(t), t)
            }
            Kind::Upper { b } => {
                let t = b - q * q;
                (2.0 * q * f(t), t)
            }
            Kind::Tail { c } => {
                let t = c - 1.0 + 1.0 / (q * q);
                (2.0 / (q * q * q) * f(t), t)
            }
        }
    }
}

struct Interval {
    piece: usize,
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, pieces: &[Piece], rtol: f64) -> Result<f64, QuadError> {
    let mut heap = BinaryHeap::new();
    for (i, p) in pieces.iter().enumerate() {
        heap.push(gk15(f, p.kind, i, p.lo, p.hi)?);
    }
    loop {
        let (mut total, mut err, mut abs_total) = (0.0, 0.0, 0.0);
        for iv in heap.iter() {
            total += iv.value;
            err += iv.error;
            abs_total += iv.abs_value;
        }
        let bound = (rtol * libm::fabs(total)).max(50.0 * f64::EPSILON * abs_total);
        if err <= bound {
            return Ok(total);
        }
        if heap.len() >= MAX_SUBINTERVALS {
            return Err(QuadError::NotConverged { partial: total, error_estimate: err });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval at machine resolution: nothing more to gain
            return Err(QuadError::NotConverged { partial: total, error_estimate: err });
        }
        let kind = pieces[worst.piece].kind;
        heap.push(gk15(f, kind, worst.piece, worst.lo, mid)?);
        heap.push(gk15(f, kind, worst.piece, mid, worst.hi)?);
    }
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, kind: Kind, piece: usize, lo: f64, hi: f64) -> Result<Interval, QuadError> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let eval = |q: f64| {
        let (v, t) = kind.eval(f, q);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { at: t })
        }
    };
    let fc = eval(center)?;
    let mut res_k = WGK[7] * fc;
    let mut res_g = WG[3] * fc;
    let mut res_abs = libm::fabs(res_k);
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (libm::fabs(f1) + libm::fabs(f2));
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * libm::fabs(fc - mean);
    for j in 0..7 {
        res_asc += WGK[j] * (libm::fabs(fv1[j] - mean) + libm::fabs(fv2[j] - mean));
    }
    let value = res_k * half;
    let res_abs = res_abs * libm::fabs(half);
    let res_asc = res_asc * libm::fabs(half);
    let mut error = libm::fabs((res_k - res_g) * half);
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (1.0f64).min(libm::pow(200.0 * error / res_asc, 1.5));
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Interval { piece, lo, hi, value, error, abs_value: res_abs })
}
