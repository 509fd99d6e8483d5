//! Adaptive Gauss–Kronrod quadrature on finite and semi-infinite intervals.
//!
//! The finite kernel is a 15-point Kronrod rule with the embedded 7-point
//! Gauss rule for error estimation, refined by globally adaptive bisection of
//! the worst interval.  Semi-infinite integrals march geometric panels along
//! a log-transformed axis `u = log(1 + z - a)` and terminate when a
//! geometric-ratio tail bound falls below tolerance; the panel sum is
//! cross-checked by re-integrating in the `u` variable itself, so a silent
//! mis-truncation would surface as a scheme disagreement.

use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::{QUAD_MAX_EVALS, QUAD_TOL_ABS, QUAD_TOL_REL};

/// Scalar types that can be integrated: real and complex values.
pub trait IntegrandValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, factor: f64) -> Self;
    /// Magnitude used for error control.
    fn norm(self) -> f64;
}

impl IntegrandValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl IntegrandValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, factor: f64) -> Self {
        self * factor
    }
    fn norm(self) -> f64 {
        self.norm()
    }
}

/// Converged quadrature value with an honest error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub abs_error_estimate: f64,
    pub evaluations: u64,
}

/// Expected tail behaviour of a semi-infinite integrand, used to seed the
/// panel width; the actual truncation decision is made from the measured
/// panel decay, so a merely approximate hint is fine.
#[derive(Debug, Clone, Copy)]
pub enum DecayHint {
    /// |f(z)| ~ e^{-rate·z} for large z.
    Exponential(f64),
    /// |f(z)| ~ z^{-power} for large z.
    Algebraic(f64),
}

/// Abscissae of the 15-point Kronrod rule on [-1, 1] (positive half).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights paired with `XGK`.
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

/// Weights of the embedded 7-point Gauss rule (nodes are `XGK[1,3,5,7]`).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss–Kronrod 15 evaluation on [a, b]; returns (kronrod value,
/// error estimate).
fn gk15<T: IntegrandValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut result_kronrod = f_center.scale(WGK[7]);
    let mut result_gauss = f_center.scale(WG[3]);
    // Mean-magnitude accumulation for the QUADPACK-style scaled error bound.
    let mut resasc = 0.0f64;
    let mut samples: [(T, f64); 15] = [(f_center, WGK[7]); 15];
    let mut count = 1;

    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let f_lo = f(center - dx);
        let f_hi = f(center + dx);
        let pair = f_lo.add(f_hi);
        result_kronrod = result_kronrod.add(pair.scale(WGK[j]));
        if j % 2 == 1 {
            result_gauss = result_gauss.add(pair.scale(WG[j / 2]));
        }
        samples[count] = (f_lo, WGK[j]);
        samples[count + 1] = (f_hi, WGK[j]);
        count += 2;
    }

    let mean = result_kronrod.scale(0.5);
    for &(value, weight) in samples.iter().take(count) {
        resasc += weight * value.sub(mean).norm();
    }
    resasc *= half.abs();

    let value = result_kronrod.scale(half);
    let raw_err = result_kronrod.sub(result_gauss).norm() * half.abs();
    let err = if resasc != 0.0 && raw_err != 0.0 {
        resasc * 1.0f64.min((200.0 * raw_err / resasc).powf(1.5))
    } else {
        raw_err
    };
    (value, err)
}

#[derive(Debug)]
struct Interval<T> {
    err: f64,
    a: f64,
    b: f64,
    value: T,
}

impl<T> PartialEq for Interval<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<T> Eq for Interval<T> {}
impl<T> PartialOrd for Interval<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Interval<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err
            .partial_cmp(&other.err)
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}

/// Globally adaptive integration of `f` over the finite interval [a, b].
///
/// The worst interval (largest error estimate) is bisected until the summed
/// error estimate meets `max(tol_rel·|value|, tol_abs)` or the evaluation
/// budget is exhausted.
pub fn integrate_finite<T: IntegrandValue>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    tol_rel: f64,
    tol_abs: f64,
    max_evals: u64,
) -> Result<QuadratureResult<T>> {
    if a == b {
        return Ok(QuadratureResult {
            value: T::zero(),
            abs_error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let mut evals: u64 = 0;
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(&mut f, a, b);
    evals += 15;
    let mut total_value = v;
    let mut total_err = e;
    heap.push(Interval {
        err: e,
        a,
        b,
        value: v,
    });

    loop {
        let target = tol_abs.max(tol_rel * total_value.norm());
        if total_err <= target {
            return Ok(QuadratureResult {
                value: total_value,
                abs_error_estimate: total_err,
                evaluations: evals,
            });
        }
        if evals >= max_evals {
            return Err(Error::NoConvergence {
                context: "finite adaptive quadrature".into(),
                evaluations: evals,
            });
        }
        let worst = heap.pop().expect("heap never empty while err > 0");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at floating-point resolution; accept its estimate.
            total_err = (total_err - worst.err).max(0.0);
            continue;
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        evals += 30;
        total_value = total_value.sub(worst.value).add(v1).add(v2);
        total_err = (total_err - worst.err).max(0.0) + e1 + e2;
        heap.push(Interval {
            err: e1,
            a: worst.a,
            b: mid,
            value: v1,
        });
        heap.push(Interval {
            err: e2,
            a: mid,
            b: worst.b,
            value: v2,
        });
    }
}

/// Integration of `f` over [a, ∞).
///
/// Panels geometric in `z` (uniform in `u = log(1 + z - a)`) are accumulated
/// until the measured panel decay extrapolates to a tail below tolerance.
/// The same panels are then re-integrated in the `u` variable as an
/// independent discretization; disagreement beyond the combined tolerance is
/// reported as `NoConvergence` rather than silently returned.  Integrands
/// whose tail does not decay (non-integrable) never satisfy the tail bound
/// and exhaust `max_evals`.
pub fn integrate_semi_infinite<T: IntegrandValue>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    hint: DecayHint,
    tol_rel: f64,
    max_evals: u64,
) -> Result<QuadratureResult<T>> {
    // Panel width in u chosen so the first panel resolves the decay scale.
    let du = match hint {
        DecayHint::Exponential(rate) if rate > 0.0 => (1.0 + 1.0 / rate).ln().clamp(0.05, 1.0),
        _ => 0.7,
    };
    let tol_abs = QUAD_TOL_ABS;
    let mut evals: u64 = 0;
    let mut accum = T::zero();
    let mut accum_err = 0.0f64;
    let mut accum_u = T::zero();
    let mut prev_norm: Option<f64> = None;
    let mut k: u32 = 0;

    loop {
        let u_lo = f64::from(k) * du;
        let u_hi = f64::from(k + 1) * du;
        let z_lo = a + u_lo.exp_m1();
        let z_hi = a + u_hi.exp_m1();
        if !z_hi.is_finite() {
            // The tail failed to decay before the end of the floating-point
            // range: the integral cannot be resolved.
            return Err(Error::NoConvergence {
                context: "semi-infinite quadrature: tail not resolved within the \
                          representable range"
                    .into(),
                evaluations: evals,
            });
        }

        let budget = max_evals.saturating_sub(evals).max(1);
        let panel = integrate_finite(&mut f, z_lo, z_hi, tol_rel * 0.1, tol_abs * 0.1, budget)?;
        evals += panel.evaluations;
        // Same panel, integrated on the log axis: z = a + e^u - 1, dz = e^u du.
        let budget_u = (max_evals.saturating_sub(evals)).max(1);
        let panel_u = integrate_finite(
            |u: f64| f(a + u.exp_m1()).scale(u.exp()),
            u_lo,
            u_hi,
            tol_rel * 0.1,
            tol_abs * 0.1,
            budget_u,
        )?;
        evals += panel_u.evaluations;

        accum = accum.add(panel.value);
        accum_err += panel.abs_error_estimate;
        accum_u = accum_u.add(panel_u.value);
        if !accum.norm().is_finite() {
            return Err(Error::NoConvergence {
                context: "semi-infinite quadrature produced a non-finite partial sum".into(),
                evaluations: evals,
            });
        }

        let panel_norm = panel.value.norm();
        let scale = accum.norm().max(tol_abs);
        // Geometric tail extrapolation: if panels decay by ratio r < 0.9 the
        // remaining tail is bounded by |panel|·r/(1-r).
        let tail_ok = match prev_norm {
            Some(prev) if prev > 0.0 => {
                let r = panel_norm / prev;
                r < 0.9 && panel_norm * r / (1.0 - r) < tol_abs.max(0.5 * tol_rel * scale)
            }
            _ => panel_norm < tol_abs && k > 2,
        };
        prev_norm = Some(panel_norm);
        k += 1;

        if tail_ok {
            let disagreement = accum.sub(accum_u).norm();
            let allowed = 10.0 * (tol_rel * scale).max(tol_abs) + 10.0 * accum_err;
            if !disagreement.is_finite() || disagreement > allowed {
                return Err(Error::NoConvergence {
                    context: format!(
                        "semi-infinite quadrature cross-check: schemes differ by {disagreement:.3e}"
                    ),
                    evaluations: evals,
                });
            }
            return Ok(QuadratureResult {
                value: accum,
                abs_error_estimate: accum_err.max(disagreement),
                evaluations: evals,
            });
        }
        if evals >= max_evals {
            return Err(Error::NoConvergence {
                context: "semi-infinite quadrature tail".into(),
                evaluations: evals,
            });
        }
    }
}

/// Convenience wrapper with the crate-default tolerances.
pub fn integrate_semi_infinite_default<T: IntegrandValue>(
    f: impl FnMut(f64) -> T,
    a: f64,
    hint: DecayHint,
) -> Result<QuadratureResult<T>> {
    integrate_semi_infinite(f, a, hint, QUAD_TOL_REL, QUAD_MAX_EVALS)
}
