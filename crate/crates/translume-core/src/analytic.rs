//! Spectral observables of the long-grating pulse model: the complex
//! amplitude coupling an input rung to a negative-frequency output rung, its
//! deep-rung asymptote, and the summed pair-number and intensity measures.
//!
//! Conventions used throughout: the input is labelled by a reduced
//! wavevector `k̃ ∈ (0, g]` and rung `n` with `k̃ + n·g > 0`; outputs sit at
//! rungs `n′` with `κ = k̃ + n′·g < 0`.  The dimensionless order parameter
//! is `p = k̃/g + n`; every quantity here carries a `sinc(πp)` factor and so
//! vanishes when `p` is a nonzero integer.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{integrate_finite, integrate_semi_infinite, DecayHint};
use crate::phase::{phase_map, PulseModel};
use crate::tolerances::{MODE_SUM_TAIL_REL, QUAD_MAX_EVALS, QUAD_TOL_ABS, QUAD_TOL_REL, RUNG_SUM_CONSECUTIVE};

/// `4γ·|k̃/g + n′|` at or above this value puts a rung in the asymptotic
/// regime where [`asymptotic_amplitude`] is accurate to better than 5%.
pub const ASYMPTOTIC_REGIME_THRESHOLD: f64 = 8.0;

/// Hard cap on rung sums; geometric decay terminates far earlier.
const MODE_SUM_MAX_RUNGS: i64 = 200_000;

/// sin(x)/x with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// True when `p` is (numerically) an integer, which zeroes the `sinc(πp)`
/// prefactor shared by all spectral quantities.
fn is_integer_order(p: f64) -> bool {
    (p - p.round()).abs() < 1e-12
}

/// Validates the reduced wavevector and rung signs shared by the spectral
/// operations; returns `(p, kappa)` with `p = k̃/g + n`, `κ = k̃ + n′g`.
fn check_spectral_domain(
    model: &PulseModel,
    k_tilde: f64,
    n: i64,
    n_prime: i64,
) -> Result<(f64, f64)> {
    let g = model.cfg.g;
    if !(k_tilde > 0.0 && k_tilde <= g) {
        return Err(Error::DomainError(format!(
            "reduced wavevector k_tilde = {k_tilde} outside (0, g] with g = {g}"
        )));
    }
    let momentum_in = k_tilde + n as f64 * g;
    if momentum_in <= 0.0 {
        return Err(Error::DomainError(format!(
            "input rung n = {n} gives non-positive input frequency (k_tilde + n*g = {momentum_in})"
        )));
    }
    let kappa = k_tilde + n_prime as f64 * g;
    if kappa >= 0.0 {
        return Err(Error::DomainError(format!(
            "output rung n_prime = {n_prime} gives non-negative output frequency (k_tilde + n_prime*g = {kappa})"
        )));
    }
    Ok((momentum_in / g, kappa))
}

/// Complex amplitude coupling input rung `n` to output rung `n′`.
///
/// Defined as the Fourier coefficient of the transmitted phase profile,
/// `F = (1/2π) ∫ g·f′(x)·e^{i p f(x)}·e^{−iκx} dx` with `p = k̃/g + n` and
/// `κ = k̃ + n′g < 0`.  Closing the contour around the pole of `f` reduces
/// this to a single real Laplace-type integral,
///
/// `F = −e^{iπp}·sinc(πp)·κ · e^{2γκ/g} ∫₀^∞ e^{κs}·(sg/(sg + 4γ))^p ds`,
///
/// which is what this routine evaluates (the shifted variable `s = z − 2γ/g`
/// keeps the integrand well-scaled even when `|κ|` is large).  The reduction
/// is verified against direct quadrature of the defining integral by
/// [`spectral_amplitude_direct`].
pub fn spectral_amplitude(
    model: &PulseModel,
    k_tilde: f64,
    n: i64,
    n_prime: i64,
) -> Result<Complex64> {
    let (p, kappa) = check_spectral_domain(model, k_tilde, n, n_prime)?;
    if is_integer_order(p) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let g = model.cfg.g;
    let gamma = model.gamma;

    let tail = integrate_semi_infinite(
        |s: f64| {
            let base = s * g / (s * g + 4.0 * gamma);
            (kappa * s).exp() * base.powf(p)
        },
        0.0,
        DecayHint::Exponential(-kappa),
        QUAD_TOL_REL,
        QUAD_MAX_EVALS,
    )?;
    let integral = (2.0 * gamma * kappa / g).exp() * tail.value;

    let phase = Complex64::new(0.0, std::f64::consts::PI * p).exp();
    let prefactor = -phase * sinc(std::f64::consts::PI * p) * kappa;
    Ok(prefactor * integral)
}

/// The same amplitude via direct quadrature of the defining Fourier
/// integral over `x ∈ [−half_width, half_width]`, with two-term endpoint
/// corrections for the truncated oscillatory tails (the Lorentzian envelope
/// decays only algebraically, so plain truncation would need an enormous
/// window).  Serves as the independent oracle for [`spectral_amplitude`].
pub fn spectral_amplitude_direct(
    model: &PulseModel,
    k_tilde: f64,
    n: i64,
    n_prime: i64,
    half_width: f64,
) -> Result<Complex64> {
    let (p, kappa) = check_spectral_domain(model, k_tilde, n, n_prime)?;
    let g = model.cfg.g;
    let gamma = model.gamma;
    let two_pi = 2.0 * std::f64::consts::PI;

    // A(x) = (g/2π)·f′(x)·e^{i p f(x)}, the smooth factor of the integrand.
    let amplitude = |x: f64| -> Complex64 {
        let (f, f_prime) = phase_map(model, x);
        Complex64::new(0.0, p * f).exp() * (g / two_pi * f_prime)
    };
    // A′(x) = (g/2π)·e^{ipf}·(f″ + i·p·g·f′²), using df/dx = g·f′.
    let amplitude_derivative = |x: f64| -> Complex64 {
        let (f, f_prime) = phase_map(model, x);
        let xg = x * g;
        let denom = xg * xg + 4.0 * gamma * gamma;
        let f_double_prime = -8.0 * gamma * g * xg / (denom * denom);
        Complex64::new(0.0, p * f).exp()
            * Complex64::new(f_double_prime, p * g * f_prime * f_prime)
            * (g / two_pi)
    };

    let finite = integrate_finite(
        |x: f64| amplitude(x) * Complex64::new(0.0, -kappa * x).exp(),
        -half_width,
        half_width,
        QUAD_TOL_REL,
        QUAD_TOL_ABS,
        QUAD_MAX_EVALS,
    )?;

    // ∫_L^∞ A e^{−iκx} dx ≈ e^{−iκL}(A(L)/(iκ) + A′(L)/(iκ)²), and the
    // mirror expression at −L; residual O(A″/κ³) is negligible for the
    // half-widths used by callers.
    let ik = Complex64::new(0.0, kappa);
    let l = half_width;
    let tail_plus =
        Complex64::new(0.0, -kappa * l).exp() * (amplitude(l) / ik + amplitude_derivative(l) / (ik * ik));
    let tail_minus = Complex64::new(0.0, kappa * l).exp()
        * (-amplitude(-l) / ik - amplitude_derivative(-l) / (ik * ik));

    Ok(finite.value + tail_plus + tail_minus)
}

/// Strength parameter `4γ·|k̃/g + n′|` deciding whether a rung sits in the
/// asymptotic regime (compare with [`ASYMPTOTIC_REGIME_THRESHOLD`]).
pub fn asymptotic_regime_parameter(model: &PulseModel, k_tilde: f64, n_prime: i64) -> f64 {
    4.0 * model.gamma * (k_tilde / model.cfg.g + n_prime as f64).abs()
}

/// Deep-rung asymptote of `|F|²`.
///
/// Laplace evaluation of the amplitude integral for `4γ|k̃/g+n′| ≫ 1`
/// (contributions concentrate at the lower endpoint) gives
///
/// `|F|² ≈ sinc²(πp)·e^{−4μ}·[Γ(p+1)·(4μ)^{−p}·S(p, 4μ)]²`,  `4μ = 4γ|k̃/g+n′|`,
///
/// with the two-correction series `S = 1 − p(p+1)/(4μ) + p(p+1)(p+1)(p+2)/(2(4μ)²)`.
/// The leading `e^{−4μ}` decay per rung is the Boltzmann factor behind the
/// effective-temperature description.  Caller is responsible for the regime;
/// below the threshold the truncated series loses accuracy smoothly.
pub fn asymptotic_amplitude(model: &PulseModel, k_tilde: f64, n: i64, n_prime: i64) -> f64 {
    let g = model.cfg.g;
    let p = k_tilde / g + n as f64;
    if is_integer_order(p) {
        return 0.0;
    }
    let four_mu = 4.0 * model.gamma * (k_tilde / g + n_prime as f64).abs();
    let s = 1.0 - p * (p + 1.0) / four_mu
        + (p * (p + 1.0)) * ((p + 1.0) * (p + 2.0)) / (2.0 * four_mu * four_mu);
    let amplitude = libm::tgamma(p + 1.0) * four_mu.powf(-p) * s;
    let sc = sinc(std::f64::consts::PI * p);
    sc * sc * (-four_mu).exp() * amplitude * amplitude
}

/// Ratio kernel `Π(z) = (z−2)/(z+2)` of the pair-number integrand.
fn pair_kernel(z: f64) -> f64 {
    (z - 2.0) / (z + 2.0)
}

/// Photon pairs per incident mode from the stationary-phase pair formula:
/// prefactor `4·sin²(πp)/(ħ·c0·g·p²)` times the double integral
/// `∬_{[2,∞)²} (z′+z″)^{−2}·(Π(z′)Π(z″))^p dz′dz″`.
///
/// The integer-`p` case returns 0 (the prefactor vanishes identically).
/// For all other orders the outer integral's tail behaves as `1/z′` —
/// the inner integral decays only like `1/(z′+2)` while `Π^p → 1` — so the
/// quadrature kernel reports `NoConvergence` once its tail-decay test and
/// evaluation budget are exhausted.  The error is propagated, not masked:
/// this operation has no finite value to return, and the saturation level
/// seen in mode sums must be taken from [`pair_mode_sum`] at fixed `d`.
pub fn pair_number(model: &PulseModel, k_tilde: f64, n: i64) -> Result<f64> {
    let g = model.cfg.g;
    if !(k_tilde > 0.0 && k_tilde <= g) {
        return Err(Error::DomainError(format!(
            "reduced wavevector k_tilde = {k_tilde} outside (0, g] with g = {g}"
        )));
    }
    let p = k_tilde / g + n as f64;
    if k_tilde + n as f64 * g <= 0.0 {
        return Err(Error::DomainError(format!(
            "input rung n = {n} gives non-positive input frequency"
        )));
    }
    if is_integer_order(p) {
        return Ok(0.0);
    }
    let pi_p = std::f64::consts::PI * p;
    let prefactor =
        4.0 * pi_p.sin().powi(2) / (model.cfg.hbar * model.cfg.c0 * g * p * p);

    let inner = |z_outer: f64| -> f64 {
        integrate_semi_infinite(
            |z: f64| pair_kernel(z).powf(p) / ((z_outer + z) * (z_outer + z)),
            2.0,
            DecayHint::Algebraic(2.0),
            1e-8,
            100_000,
        )
        .map(|r| r.value)
        .unwrap_or(f64::NAN)
    };
    let outer = integrate_semi_infinite(
        |z: f64| pair_kernel(z).powf(p) * inner(z),
        2.0,
        DecayHint::Algebraic(1.0),
        1e-8,
        60_000,
    );
    match outer {
        Ok(result) => Ok((prefactor * result.value).abs()),
        Err(Error::NoConvergence { context, evaluations }) => Err(Error::NoConvergence {
            context: format!("pair-number double integral: outer tail does not decay ({context})"),
            evaluations,
        }),
        Err(other) => Err(other),
    }
}

/// Mode-sum realization of the pair count at fixed grating length:
/// `Σ_{n′<0} |F(k̃,n,n′)|²/(ħ·c0·|k̃+n′g|)`, terminated by the geometric
/// tail rule.  This is the quantity a saturation plot actually measures.
pub fn pair_mode_sum(model: &PulseModel, k_tilde: f64, n: i64) -> Result<f64> {
    mode_sum(model, k_tilde, n, |kappa, f_sq| {
        f_sq / (model.cfg.hbar * model.cfg.c0 * kappa.abs())
    })
}

/// Numeric companion of [`intensity_sum`]: `Σ_{n′<0} |F(k̃,n,n′)|²` with the
/// tail truncated below [`MODE_SUM_TAIL_REL`] of the running total.
pub fn intensity_mode_sum(model: &PulseModel, k_tilde: f64, n: i64) -> Result<f64> {
    mode_sum(model, k_tilde, n, |_, f_sq| f_sq)
}

fn mode_sum(
    model: &PulseModel,
    k_tilde: f64,
    n: i64,
    weight: impl Fn(f64, f64) -> f64,
) -> Result<f64> {
    let g = model.cfg.g;
    let p = k_tilde / g + n as f64;
    if is_integer_order(p) {
        // Every term carries the same vanishing sinc factor.
        check_spectral_domain(model, k_tilde, n, -1)?;
        return Ok(0.0);
    }
    let mut total = 0.0f64;
    let mut quiet_streak = 0usize;
    let mut n_prime = -1i64;
    while k_tilde + n_prime as f64 * g >= 0.0 {
        n_prime -= 1; // skip rungs that are not negative-frequency outputs
    }
    loop {
        let f = spectral_amplitude(model, k_tilde, n, n_prime)?;
        let kappa = k_tilde + n_prime as f64 * g;
        let term = weight(kappa, f.norm_sqr());
        total += term;
        if total > 0.0 && term < MODE_SUM_TAIL_REL * total {
            quiet_streak += 1;
            if quiet_streak >= RUNG_SUM_CONSECUTIVE {
                return Ok(total);
            }
        } else {
            quiet_streak = 0;
        }
        n_prime -= 1;
        if n_prime < -MODE_SUM_MAX_RUNGS {
            return Err(Error::NoConvergence {
                context: "rung sum did not meet the tail rule".into(),
                evaluations: MODE_SUM_MAX_RUNGS as u64,
            });
        }
    }
}

/// Third-moment overlap constant of the pair kernel,
/// `J₃(p) = ∬_{[2,∞)²} (u+v)^{−3}·(Π(u)Π(v))^p du dv` — the convergent
/// analogue of the pair-number double integral that governs the summed
/// output intensity.
pub fn overlap_third_moment(p: f64) -> Result<f64> {
    let inner = |u: f64| -> f64 {
        integrate_semi_infinite(
            |v: f64| {
                let s = u + v;
                pair_kernel(v).powf(p) / (s * s * s)
            },
            2.0,
            DecayHint::Algebraic(3.0),
            1e-9,
            200_000,
        )
        .map(|r| r.value)
        .unwrap_or(f64::NAN)
    };
    let outer = integrate_semi_infinite(
        |u: f64| pair_kernel(u).powf(p) * inner(u),
        2.0,
        DecayHint::Algebraic(2.0),
        1e-9,
        400_000,
    )?;
    Ok(outer.value)
}

/// Total emitted intensity summed over all negative-frequency modes, in
/// closed form: `2·sinc²(πp)·J₃(p)·e^{2αgd}/g`.
///
/// The `e^{2αgd}` factor is the exponential amplification law: doubling the
/// window squares the gain.  The constant in front is pinned by collapsing
/// `Σ_{n′} |F(n′)|²` in the long-grating limit — the rung sum becomes a
/// Riemann sum over the scaled variable `4γ|n′|`, leaving the γ-independent
/// overlap constant `J₃(p)` of [`overlap_third_moment`] — and it is
/// cross-validated against [`intensity_mode_sum`] to the 1% level.
pub fn intensity_sum(model: &PulseModel, k_tilde: f64, n: i64) -> Result<f64> {
    let g = model.cfg.g;
    if !(k_tilde > 0.0 && k_tilde <= g) {
        return Err(Error::DomainError(format!(
            "reduced wavevector k_tilde = {k_tilde} outside (0, g] with g = {g}"
        )));
    }
    if k_tilde + n as f64 * g <= 0.0 {
        return Err(Error::DomainError(format!(
            "input rung n = {n} gives non-positive input frequency"
        )));
    }
    let p = k_tilde / g + n as f64;
    if is_integer_order(p) {
        return Ok(0.0);
    }
    let sc = sinc(std::f64::consts::PI * p);
    let amplification = (2.0 * model.cfg.alpha * g * model.cfg.d).exp();
    Ok(2.0 * sc * sc * overlap_third_moment(p)? * amplification / g)
}

/// Spectral amplitude record binding the rung labels to the value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralAmplitude {
    pub k_tilde: f64,
    pub n: i64,
    pub n_prime: i64,
    pub value: Complex64,
}

impl SpectralAmplitude {
    pub fn compute(model: &PulseModel, k_tilde: f64, n: i64, n_prime: i64) -> Result<Self> {
        Ok(SpectralAmplitude {
            k_tilde,
            n,
            n_prime,
            value: spectral_amplitude(model, k_tilde, n, n_prime)?,
        })
    }
}
