//! Bracketed scalar root finding.

use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("interval [{lo}, {hi}] is not a valid bracket")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("function is not finite at {at}")]
    NonFinite { at: f64 },
}

const MAX_ITER: usize = 200;

/// Finds a root of `f` inside the bracket `(lo, hi)` with Brent's method.
///
/// The returned point is within `tol` (absolute) of a sign change of `f`.
pub fn find_root<F>(mut f: F, bracket: (f64, f64), tol: f64) -> Result<f64, RootError>
where
    F: FnMut(f64) -> f64,
{
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(RootError::InvalidInterval { lo, hi });
    }
    let f_lo = f(lo);
    if !f_lo.is_finite() {
        return Err(RootError::NonFinite { at: lo });
    }
    let f_hi = f(hi);
    if !f_hi.is_finite() {
        return Err(RootError::NonFinite { at: hi });
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Err(RootError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    Ok(brent(f, lo, hi, f_lo, f_hi, tol.max(0.0), MAX_ITER))
}

/// Scans consecutive grid points for sign changes and refines each one.
///
/// Exact zeros on the grid are reported once. Pairs where `f` is not finite
/// are skipped.
pub fn find_roots_on_grid<F>(mut f: F, grid: &[f64], tol: f64) -> Vec<f64>
where
    F: FnMut(f64) -> f64,
{
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..grid.len() {
        if values[i] == 0.0 {
            roots.push(grid[i]);
            continue;
        }
        if i + 1 == grid.len() {
            break;
        }
        let (a, b) = (values[i], values[i + 1]);
        if !(a.is_finite() && b.is_finite()) || b == 0.0 {
            continue;
        }
        if (a > 0.0) != (b > 0.0) {
            roots.push(brent(&mut f, grid[i], grid[i + 1], a, b, tol.max(0.0), MAX_ITER));
        }
    }
    roots
}

/// Brent's method on a bracket that is known to contain a sign change.
pub(crate) fn brent<F>(mut f: F, lo: f64, hi: f64, f_lo: f64, f_hi: f64, tol: f64, max_iter: usize) -> f64
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b, mut fa, mut fb) = (lo, hi, f_lo, f_hi);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if libm::fabs(fc) < libm::fabs(fb) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * libm::fabs(b) + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if libm::fabs(xm) <= tol1 || fb == 0.0 {
            return b;
        }
        if libm::fabs(e) >= tol1 && libm::fabs(fa) > libm::fabs(fb) {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = libm::fabs(p);
            let min1 = 3.0 * xm * q - libm::fabs(tol1 * q);
            let min2 = libm::fabs(e * q);
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if libm::fabs(d) > tol1 {
            d
        } else if xm > 0.0 {
            tol1
        } else {
            -tol1
        };
        fb = f(b);
        if !fb.is_finite() {
            // fall back to bisection toward the finite end
            b = 0.5 * (a + c);
            fb = f(b);
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert!((find_root(|x| x - 1.0, (0.0, 2.0), 1e-14).unwrap() - 1.0).abs() < 1e-14);
        let r = find_root(libm::cos, (1.0, 2.0), 1e-15).unwrap();
        assert!((r - core::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn quadratic_root() {
        let r = find_root(|x| x * x - 2.0, (0.0, 2.0), 1e-14).unwrap();
        assert!((r - core::f64::consts::SQRT_2).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_brackets() {
        assert!(matches!(find_root(|x| x, (1.0, 0.0), 1e-12), Err(RootError::InvalidInterval { .. })));
        assert!(matches!(find_root(|x| x * x + 1.0, (-1.0, 1.0), 1e-12), Err(RootError::NoSignChange { .. })));
        assert!(matches!(find_root(|x| x, (f64::NAN, 1.0), 1e-12), Err(RootError::InvalidInterval { .. })));
    }

    #[test]
    fn epsilon_equation() {
        let a: f64 = 0.1;
        let r = find_root(|e| 2.0 * e * e + 4.0 * e - a * a, (0.0, 0.1), 1e-16).unwrap();
        // closed form -1 + sqrt(1 + a^2/2)
        let exact = -1.0 + libm::sqrt(1.0 + a * a / 2.0);
        assert!((r - exact).abs() < 1e-15);
        assert!((r - 0.00249688278817101438).abs() < 1e-15);
    }

    #[test]
    fn grid_scan_finds_all_sine_roots() {
        let grid: Vec<f64> = (0..=100).map(|i| 0.05 + i as f64 * 0.1).collect();
        let roots = find_roots_on_grid(libm::sin, &grid, 1e-14);
        assert_eq!(roots.len(), 3);
        for (k, r) in roots.iter().enumerate() {
            assert!((r - (k + 1) as f64 * core::f64::consts::PI).abs() < 1e-12);
        }
    }
}
