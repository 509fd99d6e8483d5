//! Numerical tolerances shared across the crate.
//!
//! Every tolerance used by more than one module is named here so that the
//! accuracy contract of the library is visible in one place.  The values are
//! chosen so that downstream observables (emission spectra, conversion
//! fractions) retain at least six reliable digits at desk scale.

/// Relative tolerance for adaptive quadrature.
pub const QUAD_TOL_REL: f64 = 1e-10;

/// Absolute floor for adaptive quadrature; integrals smaller than this are
/// reported as converged once the error estimate drops below it.
pub const QUAD_TOL_ABS: f64 = 1e-14;

/// Default evaluation budget for a single quadrature.  Exceeding it signals a
/// pathological (for example non-integrable) integrand.
pub const QUAD_MAX_EVALS: u64 = 10_000_000;

/// Horizon root finding: a point `X` counts as a horizon when
/// `|c(X) - c_g| < TOL_ROOT_FACTOR * c0`.
pub const TOL_ROOT_FACTOR: f64 = 1e-12;

/// Guard for the co-moving constitutive parameters: evaluation closer to a
/// horizon than `|1 - c_g^2/c^2| < TOL_POLE` is reported as singular instead
/// of returning a huge finite number.
pub const TOL_POLE: f64 = 1e-9;

/// Default relative local-error tolerance for the adaptive ray integrator.
pub const TOL_ODE: f64 = 1e-10;

/// A ray integration step below `STALL_STEP_FACTOR * (2π/g)` means the
/// trajectory has effectively frozen onto a horizon (the approach is
/// exponential and never completes); the trajectory is returned with a flag.
pub const STALL_STEP_FACTOR: f64 = 1e-14;

/// Pseudo-photon conservation residual accepted for a converged transmission
/// ladder.
pub const TOL_CONSERVE: f64 = 1e-6;

/// Amplitude allowed on the boundary rungs of a converged ladder; larger
/// leakage means the Floquet truncation is clipping real dynamics.
pub const TOL_LEAKAGE: f64 = 1e-8;

/// Row solves certify against a half-width reference solve: entries on the
/// resolved side of the row must agree to this absolute amplitude between
/// the two truncations (doubling stability).
pub const TOL_ROW_STABILITY: f64 = 1e-9;

/// Floquet truncation auto-search: starting half-width, growth is by
/// doubling, and the hard cap aborts configurations that would not fit in
/// memory or time at desk scale.
pub const N_MAX_START: usize = 64;
pub const N_MAX_CAP: usize = 4096;

/// Rung sums over emitted modes stop once this many consecutive rungs each
/// contribute less than [`RUNG_SUM_REL`] of the running total.
pub const RUNG_SUM_CONSECUTIVE: usize = 20;
pub const RUNG_SUM_REL: f64 = 1e-6;

/// Intensity and pair-number rung sums use this tighter tail threshold (the
/// summands decay geometrically, so the extra rungs are cheap).
pub const MODE_SUM_TAIL_REL: f64 = 1e-10;

/// Matrix exponentials refuse generators with `‖M·d‖₁` above this bound:
/// past it the scaling-and-squaring step count exceeds ~28 and repeated
/// squaring amplifies rounding error beyond the accuracy contract.
pub const EXPM_NORM_BOUND: f64 = 1e9;

/// Maximum allowed max-norm disagreement between the Padé and ODE matrix
/// exponential methods in self-check mode.
pub const EXPM_SELF_CHECK_TOL: f64 = 1e-9;
