//! Bracketed scalar root finding (Brent's method).

use crate::error::{Error, Result};
use crate::tolerances::TOL_ROOT_FACTOR;

/// Finds a root of `f` in `[lo, hi]` using Brent's method (inverse quadratic
/// interpolation with secant and bisection fallbacks).
///
/// Requires `f(lo)` and `f(hi)` to have opposite signs; otherwise returns
/// `NoSignChange`.  Converges to a bracket narrower than
/// `TOL_ROOT_FACTOR * (|root| + 1)` or an exact zero.
pub fn find_root_bracketed(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);

    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }

    // Keep b the best estimate: |f(b)| <= |f(a)|.
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..200 {
        if fb == 0.0 {
            return Ok(b);
        }
        if fa.signum() == fb.signum() {
            // Re-bracket against the retained opposite-sign endpoint.
            a = c;
            fa = fc;
            d = b - a;
            e = d;
        }
        if fa.abs() < fb.abs() {
            c = b;
            b = a;
            a = c;
            fc = fb;
            fb = fa;
            fa = fc;
        }

        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * TOL_ROOT_FACTOR * (b.abs() + 1.0);
        let m = 0.5 * (a - b);
        if m.abs() <= tol {
            return Ok(b);
        }

        if e.abs() >= tol && fc.abs() > fb.abs() {
            let s = fb / fc;
            let (mut p, mut q) = if a == c {
                // Secant step.
                (2.0 * m * s, 1.0 - s)
            } else {
                // Inverse quadratic interpolation.
                let q0 = fc / fa;
                let r = fb / fa;
                (
                    s * (2.0 * m * q0 * (q0 - r) - (b - c) * (r - 1.0)),
                    (q0 - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }

        c = b;
        fc = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Ok(b)
}
