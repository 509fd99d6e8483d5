//! Closed-form description of long-grating transmission: the phase map `f`,
//! its Lorentzian derivative `f′`, the compression parameter γ, and the
//! effective emission temperature.
//!
//! A pulse entering the grating window of length `d` exits with its phase
//! rearranged by a smooth map `f(x)` whose derivative concentrates into a
//! Lorentzian of width `2γ/g`, `γ = e^{−2αgd}`: the longer the grating, the
//! sharper the compression.  The exponential sharpening is what gives the
//! emission spectrum its thermal envelope, with a temperature growing as
//! `e^{2αgd}`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grating::GratingConfig;

/// Compression parameter γ = e^{−2αgd}.
pub fn gamma(cfg: &GratingConfig) -> f64 {
    (-2.0 * cfg.alpha * cfg.g * cfg.d).exp()
}

/// Threshold below which the Lorentzian pulse model is quantitatively
/// reliable (long-grating regime, `g·d ≫ 1`).
pub const LONG_GRATING_GAMMA: f64 = 0.05;

/// Grating configuration together with its derived compression parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseModel {
    pub cfg: GratingConfig,
    /// γ = e^{−2αgd}; lies in (0, 1].
    pub gamma: f64,
    /// True when γ < 0.05 and the model's quantitative claims apply.
    pub long_grating: bool,
}

impl PulseModel {
    pub fn new(cfg: GratingConfig) -> Result<Self> {
        cfg.validate()?;
        let gamma = gamma(&cfg);
        Ok(PulseModel {
            cfg,
            gamma,
            long_grating: gamma < LONG_GRATING_GAMMA,
        })
    }
}

/// Phase map of the transmitted pulse: returns `(f, f′)` at position `x`.
///
/// `f′(x) = 4γ/(x²g² + 4γ²)` is the Lorentzian phase density.  The phase
/// itself is the continuous branch with `f(−∞) = 0`, `f(+∞) = 2π`,
/// realized as `f(x) = 2·(π − atan2(2γ, xg))`; it is monotone with
/// `df/dx = g·f′(x)` (density normalized so `∫ f′ dx = 2π/g`).
pub fn phase_map(model: &PulseModel, x: f64) -> (f64, f64) {
    let g = model.cfg.g;
    let gamma = model.gamma;
    let xg = x * g;
    let f = 2.0 * (std::f64::consts::PI - (2.0 * gamma).atan2(xg));
    let f_prime = 4.0 * gamma / (xg * xg + 4.0 * gamma * gamma);
    (f, f_prime)
}

/// Quadrature of `∫_{−∞}^{∞} f′(x) dx` (exact value 2π/g) — a library
/// self-test exposed for property checks.  The substitution `x = tan u`
/// compactifies the domain without flattening the integrand.
pub fn phase_density_normalization(model: &PulseModel) -> Result<f64> {
    use crate::numerics::integrate_finite;
    use crate::tolerances::{QUAD_MAX_EVALS, QUAD_TOL_ABS, QUAD_TOL_REL};
    let half_pi = std::f64::consts::FRAC_PI_2;
    let result = integrate_finite(
        |u: f64| {
            let sec2 = 1.0 / (u.cos() * u.cos());
            let (_, f_prime) = phase_map(model, u.tan());
            f_prime * sec2
        },
        -half_pi + 1e-12,
        half_pi - 1e-12,
        QUAD_TOL_REL,
        QUAD_TOL_ABS,
        QUAD_MAX_EVALS,
    )?;
    Ok(result.value)
}

/// Effective emission temperature in its two equivalent printed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HawkingTemperature {
    /// `ħ·g·c0/(4k_B) · e^{2αgd}`.
    pub wavevector_form: f64,
    /// `ħ·Ω/(4k_B) · e^{2αgd}`.
    pub frequency_form: f64,
    /// The two forms coincide exactly when `c_g = c0`; false flags a
    /// configuration where the printed forms disagree and the caller must
    /// choose deliberately.
    pub forms_agree: bool,
}

/// Effective temperature of the quasi-thermal emission envelope,
/// `T_H = (ħ g c0/4k_B)·e^{2αgd}`, equivalently `(ħΩ/4k_B)·e^{2αgd}` when
/// the grating rides at the background speed (`c_g = c0`).
pub fn hawking_temperature(cfg: &GratingConfig) -> HawkingTemperature {
    let growth = (2.0 * cfg.alpha * cfg.g * cfg.d).exp();
    let wavevector_form = cfg.hbar * cfg.g * cfg.c0 / (4.0 * cfg.k_b) * growth;
    let frequency_form = cfg.hbar * cfg.omega / (4.0 * cfg.k_b) * growth;
    let forms_agree =
        (wavevector_form - frequency_form).abs() <= 1e-12 * wavevector_form.abs().max(frequency_form.abs());
    HawkingTemperature {
        wavevector_form,
        frequency_form,
        forms_agree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn model(d: f64) -> PulseModel {
        let cfg = GratingConfig::new(1.0, 0.05, 1.0, 1.0, d, 1.0).unwrap();
        PulseModel::new(cfg).unwrap()
    }

    #[test]
    fn gamma_values() {
        assert_relative_eq!(model(20.0).gamma, (-2.0f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(model(0.0).gamma, 1.0, epsilon = 1e-15);
        assert_relative_eq!(model(40.0).gamma, (-4.0f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn long_grating_flag() {
        assert!(!model(20.0).long_grating); // γ = e^{−2} ≈ 0.135
        assert!(model(40.0).long_grating); // γ = e^{−4} ≈ 0.018
    }

    #[test]
    fn phase_density_peak_and_width() {
        let m = model(20.0);
        let (_, at_zero) = phase_map(&m, 0.0);
        assert_relative_eq!(at_zero, 1.0 / m.gamma, epsilon = 1e-13);
        // Half maximum at xg = 2γ.
        let (_, at_half) = phase_map(&m, 2.0 * m.gamma / m.cfg.g);
        assert_relative_eq!(at_half, 0.5 / m.gamma, epsilon = 1e-13);
        // Decay far away.
        let (_, far) = phase_map(&m, 1e6);
        assert!(far < 1e-11);
    }

    #[test]
    fn phase_branch_endpoints() {
        let m = model(20.0);
        let (f_neg, _) = phase_map(&m, -1e9);
        let (f_mid, _) = phase_map(&m, 0.0);
        let (f_pos, _) = phase_map(&m, 1e9);
        assert!(f_neg.abs() < 1e-8);
        assert_relative_eq!(f_mid, PI, epsilon = 1e-12);
        assert_relative_eq!(f_pos, 2.0 * PI, epsilon = 1e-8);
    }

    #[test]
    fn phase_is_monotone_and_consistent_with_density() {
        let m = model(20.0);
        let h = 1e-6;
        for i in -50..50 {
            let x = 0.11 * i as f64;
            let (f_lo, _) = phase_map(&m, x - h);
            let (f_hi, _) = phase_map(&m, x + h);
            let (_, f_prime) = phase_map(&m, x);
            let derivative = (f_hi - f_lo) / (2.0 * h);
            assert!(derivative > 0.0);
            assert_relative_eq!(derivative, m.cfg.g * f_prime, max_relative = 1e-6);
        }
    }

    #[test]
    fn phase_density_normalizes_to_full_turn() {
        for d in [5.0, 20.0, 40.0] {
            let m = model(d);
            let total = phase_density_normalization(&m).unwrap();
            assert_relative_eq!(total, 2.0 * PI / m.cfg.g, max_relative = 1e-9);
        }
    }

    #[test]
    fn temperature_flat_grating() {
        let cfg = GratingConfig::new(1.0, 0.0, 1.0, 1.0, 7.0, 1.0).unwrap();
        let t = hawking_temperature(&cfg);
        assert_relative_eq!(t.wavevector_form, 0.25, epsilon = 1e-15);
        assert!(t.forms_agree);
    }

    #[test]
    fn temperature_resonant_long_grating() {
        let cfg = GratingConfig::new(1.0, 0.05, 1.0, 1.0, 5.0 * 2.0 * PI, 1.0).unwrap();
        let t = hawking_temperature(&cfg);
        assert_relative_eq!(t.frequency_form, 0.25 * PI.exp(), max_relative = 1e-12);
        assert!(t.forms_agree);
    }

    #[test]
    fn temperature_doubles_exponentially_with_length() {
        let short = GratingConfig::new(1.0, 0.05, 1.0, 1.0, 20.0, 1.0).unwrap();
        let long = GratingConfig::new(1.0, 0.05, 1.0, 1.0, 40.0, 1.0).unwrap();
        let ratio = hawking_temperature(&long).wavevector_form
            / hawking_temperature(&short).wavevector_form;
        assert_relative_eq!(ratio, (2.0f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn temperature_forms_disagree_off_resonance() {
        // Ω/g = 0.5 ≠ c0 = 1: the two printed forms differ by 2×.
        let cfg = GratingConfig::new(1.0, 0.05, 1.0, 0.5, 10.0, 1.0).unwrap();
        let t = hawking_temperature(&cfg);
        assert!(!t.forms_agree);
        assert_relative_eq!(t.wavevector_form, 2.0 * t.frequency_form, epsilon = 1e-12);
    }
}
