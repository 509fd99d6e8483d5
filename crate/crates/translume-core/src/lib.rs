//! Numerical library for transluminal space-time diffraction gratings.
//!
//! A refractive-index modulation `ε = μ = ε_b + 2α·cos(gx − Ωt)` travels at
//! speed `c_g = Ω/g`.  When that speed lies strictly between the slowest and
//! fastest local light speeds of the profile, every period of the grating
//! carries a pair of light horizons: surfaces that rays can cross in one
//! direction only.  Such a grating converts positive- to negative-frequency
//! light and amplifies the quantum vacuum with a black-body signature whose
//! temperature is set by the steepness of the profile — a laboratory
//! analogue of Hawking emission, repeated once per grating period.
//!
//! The crate is organized in layers:
//!
//! * [`grating`] — the profile itself: local speed, co-moving material
//!   parameters, horizon location and classification, ray tracing.
//! * [`phase`] — the long-grating (dispersal-horizon) pulse model: phase
//!   map, analogue surface gravity, Hawking temperature.
//! * [`analytic`] — closed-form spectral amplitudes of the scattered
//!   negative-frequency orders, their thermal asymptotics, and mode sums.
//! * [`floquet`] — exact transmission through a finite grating window via
//!   tridiagonal coupled-mode propagation.
//! * [`emission`] — observables: spontaneous (vacuum) spectra, thermal
//!   fits, stimulated conversion fractions, aliasing and photon counts.
//! * [`numerics`] — the supporting quadrature, root finding, ODE, and
//!   matrix-exponential kernels, with shared tolerances in [`tolerances`].
//!
//! All quantities use natural units fixed by the configuration: lengths in
//! units of the background light speed `c0` times time, `ħ` and `k_B`
//! configurable (both default to 1).

pub mod analytic;
pub mod emission;
pub mod error;
pub mod floquet;
pub mod grating;
pub mod numerics;
pub mod phase;
pub mod tolerances;

pub use analytic::{
    asymptotic_amplitude, asymptotic_regime_parameter, intensity_mode_sum, intensity_sum,
    overlap_third_moment, pair_mode_sum, pair_number, spectral_amplitude,
    spectral_amplitude_direct, SpectralAmplitude,
};
pub use emission::{
    alias_signature, default_omega_grid, flux_from_ladder_column, photon_counts,
    stimulated_fractions, thermal_fit, vacuum_spectrum, AliasSignature, EmissionSpectrum, Engine,
    FluxSpectrum, PhotonCounts, StimulatedSpectrum, ThermalFit,
};
pub use error::{Error, Result};
pub use floquet::{
    conservation_residual, coupling_matrix, transmission_ladder, transmission_row,
    window_kernel_weights, LadderRow, TransmissionLadder, Truncation, WindowKernel,
};
pub use grating::{
    comoving_params, find_horizons, local_speed, local_speed_slope, refractive_profile, trace_ray,
    GratingConfig, Horizon, HorizonKind, HorizonSet, RayTrajectory,
};
pub use phase::{
    gamma, hawking_temperature, phase_density_normalization, phase_map, HawkingTemperature,
    PulseModel,
};
