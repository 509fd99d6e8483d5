//! Benchmark-only crate; see `benches/physics.rs` for the measured
//! workloads (dense ladder exponentials, single-row solves, analytic
//! spectral amplitudes, and ray tracing).
