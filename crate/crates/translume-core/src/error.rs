//! Error contract shared by all modules.

use thiserror::Error;

/// Unified error type for the physics and numerics layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The configuration admits no point where the local wave speed equals
    /// the grating speed, so horizons (and everything derived from them) do
    /// not exist.  Degenerate tangency — the grating speed exactly equal to
    /// an extremum of the local speed — is classified the same way because
    /// the analytic machinery assumes two simple roots.
    #[error("configuration is not transluminal: c_g = {c_g} outside the open range ({c_min}, {c_max})")]
    NotTransluminal { c_g: f64, c_min: f64, c_max: f64 },

    /// Co-moving constitutive parameters evaluated at (or numerically on top
    /// of) an event horizon, where they diverge.
    #[error("co-moving parameters are singular at X = {x}: |1 - c_g^2/c^2| = {denominator:.3e} < {tol:.1e}")]
    HorizonSingularity { x: f64, denominator: f64, tol: f64 },

    /// A quadrature or iterative scheme exhausted its evaluation budget
    /// without meeting its convergence criterion.
    #[error("no convergence in {context} after {evaluations} evaluations")]
    NoConvergence { context: String, evaluations: u64 },

    /// Bracketed root finding requires a sign change over the bracket.
    #[error("no sign change on bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    /// Input outside the physical domain of the operation.
    #[error("domain error: {0}")]
    DomainError(String),

    /// The scaled matrix exponential would need more squarings than the
    /// backward-error analysis supports.
    #[error("matrix exponential overflow risk: ||M*d||_1 = {norm:.3e} exceeds bound {bound:.1e}")]
    OverflowRisk { norm: f64, bound: f64 },

    /// Thermal fitting needs at least three inter-zero lobes with positive
    /// maxima.
    #[error("insufficient peaks for thermal fit: found {found}, need {needed}")]
    InsufficientPeaks { found: usize, needed: usize },

    /// A structurally invalid physical configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
