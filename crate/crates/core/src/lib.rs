//! Link-level Monte Carlo simulator for wirelessly-fed pinching-antenna
//! systems (Wi-PASS) and the fixed-antenna baselines they are compared to.
//!
//! The crate is organized along the simulation pipeline:
//!
//! - [`units`] — dB/dBm/watt conversions and physical constants; everything
//!   downstream computes in linear watts and ratios.
//! - [`geometry`] — 3D positions of BS, relay, waveguide and users, plus the
//!   pinching-antenna placement rule.
//! - [`channel`] — path loss, log-normal shadowing, Rician/Rayleigh fading,
//!   in-waveguide loss, free-space PA radiation, and residual
//!   self-interference.
//! - [`schemes`] — the five end-to-end transmission schemes, each mapping one
//!   fading realization to an achieved spectral efficiency.
//! - [`montecarlo`] — deterministic, parallelizable trial engine with
//!   counter-based substreams and rate statistics.
//! - [`experiment`] — config ingestion, power/distance sweeps, CSV and
//!   plot-series output.

pub mod channel;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod montecarlo;
pub mod schemes;
pub mod units;

pub use error::SimError;

/// Crate result alias.
pub type Result<T> = std::result::Result<T, SimError>;
