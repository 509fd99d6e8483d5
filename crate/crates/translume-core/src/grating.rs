//! Grating profile, co-moving constitutive parameters, horizon location and
//! classification, and characteristic ray tracing.
//!
//! The medium is an impedance-matched traveling modulation
//! `ε(x,t) = μ(x,t) = ε_b + 2α·cos(gx − Ωt)` moving at speed `c_g = Ω/g`.
//! In the co-moving coordinate `X = x − c_g·t` the profile is static and the
//! local wave speed is `c(X) = c0/ε(X)`.  When `c_g` falls inside the range
//! of `c(X)` the configuration is *transluminal*: the equation `c(X) = c_g`
//! has two simple roots per period, event-horizon analogues through which
//! rays cannot pass.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{find_root_bracketed, integrate_ode_scalar};
use crate::tolerances::{TOL_ODE, TOL_POLE, TOL_ROOT_FACTOR};

fn default_unit() -> f64 {
    1.0
}

/// Physical parameters of the grating, window, and unit system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GratingConfig {
    /// Background relative permittivity ε_b (dimensionless).
    pub eps_b: f64,
    /// Modulation amplitude α; the permittivity swings by ±2α.
    pub alpha: f64,
    /// Spatial frequency g of the modulation (rad/length).
    pub g: f64,
    /// Temporal frequency Ω of the modulation (rad/time).
    #[serde(rename = "Omega")]
    pub omega: f64,
    /// Grating window length d.
    pub d: f64,
    /// Background light speed c0.
    pub c0: f64,
    /// Reduced Planck constant (natural units by default).
    #[serde(default = "default_unit")]
    pub hbar: f64,
    /// Boltzmann constant (natural units by default).
    #[serde(rename = "kB", default = "default_unit")]
    pub k_b: f64,
}

impl GratingConfig {
    /// Builds a validated configuration in natural units (ħ = k_B = 1).
    pub fn new(eps_b: f64, alpha: f64, g: f64, omega: f64, d: f64, c0: f64) -> Result<Self> {
        let cfg = GratingConfig {
            eps_b,
            alpha,
            g,
            omega,
            d,
            c0,
            hbar: 1.0,
            k_b: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks the structural invariants; call after any manual field edit.
    pub fn validate(&self) -> Result<()> {
        let all_finite = [
            self.eps_b, self.alpha, self.g, self.omega, self.d, self.c0, self.hbar, self.k_b,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidConfig("non-finite parameter".into()));
        }
        if self.alpha < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "alpha must be non-negative, got {}",
                self.alpha
            )));
        }
        if self.eps_b - 2.0 * self.alpha <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "permittivity must stay positive: eps_b - 2*alpha = {} <= 0",
                self.eps_b - 2.0 * self.alpha
            )));
        }
        if self.g <= 0.0 {
            return Err(Error::InvalidConfig(format!("g must be positive, got {}", self.g)));
        }
        if self.omega < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "Omega must be non-negative, got {}",
                self.omega
            )));
        }
        if self.d < 0.0 {
            return Err(Error::InvalidConfig(format!("d must be non-negative, got {}", self.d)));
        }
        if self.c0 <= 0.0 {
            return Err(Error::InvalidConfig(format!("c0 must be positive, got {}", self.c0)));
        }
        if self.hbar <= 0.0 || self.k_b <= 0.0 {
            return Err(Error::InvalidConfig(
                "hbar and kB must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Grating phase speed c_g = Ω/g.
    pub fn c_g(&self) -> f64 {
        self.omega / self.g
    }

    /// Spatial period 2π/g of the modulation.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.g
    }

    /// Slowest local wave speed, reached where the permittivity peaks.
    pub fn c_min(&self) -> f64 {
        self.c0 / (self.eps_b + 2.0 * self.alpha)
    }

    /// Fastest local wave speed, reached where the permittivity dips.
    pub fn c_max(&self) -> f64 {
        self.c0 / (self.eps_b - 2.0 * self.alpha)
    }

    /// True when `c(X) = c_g` has real solutions, i.e. the grating speed
    /// lies strictly inside the range of local wave speeds.  Tangency
    /// (`c_g` equal to an extremum) does not count: the horizon analysis
    /// assumes two simple roots.
    pub fn is_transluminal(&self) -> bool {
        self.c_min() < self.c_g() && self.c_g() < self.c_max()
    }
}

/// Relative permittivity ε(X) = ε_b + 2α·cos(gX) at co-moving position X.
pub fn refractive_profile(cfg: &GratingConfig, x: f64) -> f64 {
    cfg.eps_b + 2.0 * cfg.alpha * (cfg.g * x).cos()
}

/// Local wave speed c(X) = c0/ε(X).
pub fn local_speed(cfg: &GratingConfig, x: f64) -> f64 {
    cfg.c0 / refractive_profile(cfg, x)
}

/// Slope dc/dX = 2αg·c0·sin(gX)/ε(X)² of the local wave speed.
pub fn local_speed_slope(cfg: &GratingConfig, x: f64) -> f64 {
    let eps = refractive_profile(cfg, x);
    2.0 * cfg.alpha * cfg.g * cfg.c0 * (cfg.g * x).sin() / (eps * eps)
}

/// Galilean co-moving constitutive parameters `(ε_mov, μ_mov, ξ_mov)`.
///
/// The transform to the frame riding with the grating turns the
/// impedance-matched pair `ε = μ` into
/// `ε_mov = μ_mov = ε/(1 − c_g²/c²)` plus a magneto-electric coupling
/// `ξ_mov = −εμ·c_g/(1 − c_g²/c²)`, all diverging where `c(X) = c_g`.
pub fn comoving_params(cfg: &GratingConfig, x: f64) -> Result<(f64, f64, f64)> {
    let eps = refractive_profile(cfg, x);
    let c = cfg.c0 / eps;
    let c_g = cfg.c_g();
    let denominator = 1.0 - (c_g / c) * (c_g / c);
    if denominator.abs() < TOL_POLE {
        return Err(Error::HorizonSingularity {
            x,
            denominator,
            tol: TOL_POLE,
        });
    }
    let eps_mov = eps / denominator;
    let xi_mov = -eps * eps * c_g / denominator;
    Ok((eps_mov, eps_mov, xi_mov))
}

/// Horizon character, classified by the slope of c at the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HorizonKind {
    /// dc/dX < 0: rays converge onto this point and wave energy piles up.
    Accumulation,
    /// dc/dX > 0: rays are repelled from this point and energy spreads out.
    Dispersal,
}

/// One root of c(X) = c_g within the fundamental period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Horizon {
    /// Co-moving position in [0, 2π/g).
    pub x: f64,
    pub kind: HorizonKind,
    /// Slope dc/dX at the root (1/time).
    pub dcdx: f64,
}

/// All horizons of one grating period, in ascending position order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonSet {
    pub entries: Vec<Horizon>,
    /// Spatial period of the lattice; every `entry.x + k·period` is a
    /// horizon of the unwrapped co-moving axis.
    pub period: f64,
}

impl HorizonSet {
    /// Nearest horizon values strictly below and above the unwrapped
    /// coordinate `x0`, on the full periodic lattice.
    pub fn bracketing(&self, x0: f64) -> Option<(f64, f64)> {
        if self.entries.is_empty() {
            return None;
        }
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for entry in &self.entries {
            let k = ((x0 - entry.x) / self.period).floor();
            for shift in [k - 1.0, k, k + 1.0] {
                let value = entry.x + shift * self.period;
                if value < x0 && value > lo {
                    lo = value;
                }
                if value > x0 && value < hi {
                    hi = value;
                }
            }
        }
        Some((lo, hi))
    }
}

/// Locates and classifies all horizons in [0, 2π/g).
///
/// For the cosine profile the roots of `c(X) = c_g` satisfy
/// `cos(gX) = (c0/c_g − ε_b)/(2α)`, one root on each half-period; they are
/// polished by bracketed root finding on `c(X) − c_g` so the result honours
/// the root tolerance rather than trusting the closed form.
pub fn find_horizons(cfg: &GratingConfig) -> Result<HorizonSet> {
    cfg.validate()?;
    if !cfg.is_transluminal() {
        return Err(Error::NotTransluminal {
            c_g: cfg.c_g(),
            c_min: cfg.c_min(),
            c_max: cfg.c_max(),
        });
    }
    let c_g = cfg.c_g();
    let half = 0.5 * cfg.period();
    let objective = |x: f64| local_speed(cfg, x) - c_g;

    let mut entries = Vec::with_capacity(2);
    for (lo, hi) in [(0.0, half), (half, 2.0 * half)] {
        let root = find_root_bracketed(objective, lo, hi)?;
        let residual = objective(root).abs();
        if residual >= TOL_ROOT_FACTOR * cfg.c0 * 1e3 {
            return Err(Error::NoConvergence {
                context: format!("horizon root residual {residual:.3e} at X = {root:.6}"),
                evaluations: 0,
            });
        }
        let dcdx = local_speed_slope(cfg, root);
        let kind = if dcdx > 0.0 {
            HorizonKind::Dispersal
        } else {
            HorizonKind::Accumulation
        };
        entries.push(Horizon { x: root, kind, dcdx });
    }
    entries.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
    Ok(HorizonSet {
        entries,
        period: cfg.period(),
    })
}

/// Time-sampled characteristic path of a wavefront.
#[derive(Debug, Clone, PartialEq)]
pub struct RayTrajectory {
    /// Lab-frame samples (t, x), ordered in time, endpoints included.
    pub samples: Vec<(f64, f64)>,
    /// Unwrapped co-moving coordinate X = x − c_g·t at the same times; the
    /// canonical representation, since horizon-crossing statements are only
    /// meaningful on the unwrapped axis.
    pub comoving: Vec<f64>,
    /// True when step control underflowed before reaching the requested end
    /// time; the samples then cover the reachable part only.
    pub stalled: bool,
}

/// Traces the characteristic `dx/dt = c(x − c_g·t)` from `(t0, x0)` to
/// `t_end`.
///
/// Integration happens in the co-moving frame, where the equation is the
/// autonomous `dX/dt = c(X) − c_g` whose fixed points are exactly the
/// horizons; rays approach them exponentially and can never cross.  The
/// step size is capped so the discrete flow shares that property, and a
/// final projection repairs sub-tolerance rounding excursions across a
/// horizon (excursions beyond 1e−6 of a period are reported as failures).
pub fn trace_ray(
    cfg: &GratingConfig,
    x0: f64,
    t0: f64,
    t_end: f64,
    tol: Option<f64>,
    max_step: Option<f64>,
) -> Result<RayTrajectory> {
    cfg.validate()?;
    if !(t_end > t0) {
        return Err(Error::DomainError(format!(
            "trace_ray needs t_end > t0, got t0 = {t0}, t_end = {t_end}"
        )));
    }
    let tol = tol.unwrap_or(TOL_ODE);
    let c_g = cfg.c_g();
    let x0_comoving = x0 - c_g * t0;

    // Cap the step so that |h·dc/dX| stays well inside the stability region
    // of the embedded pair near a horizon fixed point; otherwise the
    // discrete map could hop across.  Also bound sample spacing for output.
    let slope_cap = {
        let eps_min = cfg.eps_b - 2.0 * cfg.alpha;
        let lambda_max = 2.0 * cfg.alpha * cfg.g * cfg.c0 / (eps_min * eps_min);
        if lambda_max > 0.0 {
            0.5 / lambda_max
        } else {
            f64::INFINITY
        }
    };
    let span_cap = (t_end - t0) / 256.0;
    let step_cap = max_step.unwrap_or(f64::INFINITY).min(slope_cap).min(span_cap);

    let run = integrate_ode_scalar(
        |_, x| local_speed(cfg, x) - c_g,
        t0,
        x0_comoving,
        t_end,
        tol,
        Some(step_cap),
    );

    let mut comoving: Vec<f64> = run.samples.iter().map(|&(_, x)| x).collect();
    let times: Vec<f64> = run.samples.iter().map(|&(t, _)| t).collect();

    if cfg.is_transluminal() {
        let horizons = find_horizons(cfg)?;
        if let Some((lo, hi)) = horizons.bracketing(x0_comoving) {
            let allowance = 1e-6 * cfg.period();
            for x in comoving.iter_mut() {
                if *x < lo || *x > hi {
                    let excess = (*x - x0_comoving).abs().min((lo - *x).abs().min((*x - hi).abs()));
                    if excess > allowance {
                        return Err(Error::NoConvergence {
                            context: format!(
                                "ray crossed a horizon by {excess:.3e} (beyond rounding tolerance)"
                            ),
                            evaluations: 0,
                        });
                    }
                    *x = x.clamp(lo, hi);
                }
            }
        }
    }

    let samples: Vec<(f64, f64)> = times
        .iter()
        .zip(&comoving)
        .map(|(&t, &x)| (t, x + c_g * t))
        .collect();
    Ok(RayTrajectory {
        samples,
        comoving,
        stalled: run.stalled,
    })
}
