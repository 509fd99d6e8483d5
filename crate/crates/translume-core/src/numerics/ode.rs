//! Explicit Dormand–Prince 5(4) integration with adaptive step control.
//!
//! Two entry points: a scalar driver used for ray trajectories (dense sample
//! output, stall detection instead of hard failure) and a complex-vector
//! driver used to cross-check matrix exponentials column by column.

use num_complex::Complex64;

use crate::tolerances::STALL_STEP_FACTOR;

/// Butcher tableau of the Dormand–Prince 5(4) pair.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Difference between the 5th- and embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Result of a scalar integration run.
#[derive(Debug, Clone)]
pub struct OdeOutcome {
    /// Accepted solution samples `(t, x)`, including both endpoints.
    pub samples: Vec<(f64, f64)>,
    /// True when step control underflowed before reaching `t_end`; the
    /// samples then cover only the reachable part of the interval.
    pub stalled: bool,
    pub steps_accepted: u64,
    pub steps_rejected: u64,
}

/// Integrates `dx/dt = f(t, x)` from `(t0, x0)` to `t_end`.
///
/// Local error is controlled against `tol` (mixed absolute/relative).  A
/// `max_step` bounds sample spacing for dense output.  Step underflow sets
/// the `stalled` flag instead of failing, so callers keep the partial
/// trajectory.
pub fn integrate_ode_scalar(
    mut f: impl FnMut(f64, f64) -> f64,
    t0: f64,
    x0: f64,
    t_end: f64,
    tol: f64,
    max_step: Option<f64>,
) -> OdeOutcome {
    let span = t_end - t0;
    let mut samples = vec![(t0, x0)];
    if span == 0.0 {
        return OdeOutcome {
            samples,
            stalled: false,
            steps_accepted: 0,
            steps_rejected: 0,
        };
    }
    let direction = span.signum();
    let h_cap = max_step.unwrap_or(span.abs()).min(span.abs());
    let h_floor = STALL_STEP_FACTOR * span.abs().max(t0.abs()).max(t_end.abs());

    let mut t = t0;
    let mut x = x0;
    let mut h = (0.01 * span.abs()).min(h_cap);
    let mut k = [0.0f64; 7];
    k[0] = f(t, x);
    let mut accepted = 0u64;
    let mut rejected = 0u64;

    while (t_end - t) * direction > 0.0 {
        h = h.min(h_cap).min((t_end - t).abs());
        if h < h_floor {
            return OdeOutcome {
                samples,
                stalled: true,
                steps_accepted: accepted,
                steps_rejected: rejected,
            };
        }
        let hd = h * direction;
        for stage in 1..7 {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate().take(stage) {
                acc += A[stage][j] * kj;
            }
            k[stage] = f(t + C[stage] * hd, x + hd * acc);
        }
        // Stage 7 uses the 5th-order weights, so k[6] is f at the candidate.
        let x_new = x + hd * (A[6][0] * k[0] + A[6][2] * k[2] + A[6][3] * k[3] + A[6][4] * k[4] + A[6][5] * k[5]);
        let err_raw: f64 = (0..7).map(|i| E[i] * k[i]).sum::<f64>() * hd;
        let scale = tol * (1.0 + x.abs().max(x_new.abs()));
        let err = (err_raw / scale).abs();

        if err <= 1.0 || h <= h_floor * 2.0 {
            t += hd;
            x = x_new;
            samples.push((t, x));
            k[0] = k[6]; // first-same-as-last
            accepted += 1;
        } else {
            rejected += 1;
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
    }

    OdeOutcome {
        samples,
        stalled: false,
        steps_accepted: accepted,
        steps_rejected: rejected,
    }
}

/// Result of a complex-vector integration run.
#[derive(Debug, Clone)]
pub struct OdeVecOutcome {
    /// State at `t_end` (or at the stall point).
    pub y: Vec<Complex64>,
    pub stalled: bool,
}

/// Integrates `dy/dt = f(t, y)` for a complex state vector; `f` writes the
/// derivative into its third argument.  Used to cross-check matrix
/// exponentials, so only the endpoint state is kept.
pub fn integrate_ode_complex_vec(
    mut f: impl FnMut(f64, &[Complex64], &mut [Complex64]),
    t0: f64,
    y0: &[Complex64],
    t_end: f64,
    tol: f64,
) -> OdeVecOutcome {
    let dim = y0.len();
    let span = t_end - t0;
    if span == 0.0 || dim == 0 {
        return OdeVecOutcome {
            y: y0.to_vec(),
            stalled: false,
        };
    }
    let direction = span.signum();
    let h_floor = STALL_STEP_FACTOR * span.abs().max(t0.abs()).max(t_end.abs());

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = 0.01 * span.abs();
    let zero = Complex64::new(0.0, 0.0);
    let mut k = vec![vec![zero; dim]; 7];
    let mut work = vec![zero; dim];
    f(t, &y, &mut k[0]);

    while (t_end - t) * direction > 0.0 {
        h = h.min((t_end - t).abs());
        if h < h_floor {
            return OdeVecOutcome { y, stalled: true };
        }
        let hd = h * direction;
        for stage in 1..7 {
            for i in 0..dim {
                let mut acc = zero;
                for j in 0..stage {
                    acc += k[j][i].scale(A[stage][j]);
                }
                work[i] = y[i] + acc.scale(hd);
            }
            let (head, tail) = k.split_at_mut(stage);
            let _ = head;
            f(t + C[stage] * hd, &work, &mut tail[0]);
        }
        let mut err = 0.0f64;
        let mut y_new = vec![zero; dim];
        for i in 0..dim {
            let step = k[0][i].scale(A[6][0])
                + k[2][i].scale(A[6][2])
                + k[3][i].scale(A[6][3])
                + k[4][i].scale(A[6][4])
                + k[5][i].scale(A[6][5]);
            y_new[i] = y[i] + step.scale(hd);
            let e: Complex64 = (0..7).map(|s| k[s][i].scale(E[s])).sum();
            let scale = tol * (1.0 + y[i].norm().max(y_new[i].norm()));
            err = err.max((e.scale(hd)).norm() / scale);
        }

        if err <= 1.0 || h <= h_floor * 2.0 {
            t += hd;
            y = y_new;
            let (k6, k0) = (k[6].clone(), &mut k[0]);
            k0.copy_from_slice(&k6);
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
    }

    OdeVecOutcome { y, stalled: false }
}
