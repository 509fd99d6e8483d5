//! Shared numerical kernels: adaptive quadrature on finite and semi-infinite
//! intervals, complex tridiagonal matrix exponentials, explicit
//! Runge–Kutta integration, and bracketed root finding.
//!
//! Every kernel reports failure through [`crate::error::Error`] instead of
//! returning silently degraded values; tolerance defaults live in
//! [`crate::tolerances`].

pub mod expm;
pub mod ode;
pub mod quadrature;
pub mod rootfind;

pub use expm::{
    expm_action_tridiag, expm_via_ode, matrix_exponential_tridiag,
    matrix_exponential_tridiag_checked, BandedPropagator, CMatrix, Tridiagonal,
};
pub use ode::{integrate_ode_complex_vec, integrate_ode_scalar, OdeOutcome, OdeVecOutcome};
pub use quadrature::{
    integrate_finite, integrate_semi_infinite, integrate_semi_infinite_default, DecayHint,
    IntegrandValue, QuadratureResult,
};
pub use rootfind::find_root_bracketed;
