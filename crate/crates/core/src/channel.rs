//! Channel gain models: close-in path loss, log-normal shadowing,
//! Rician/Rayleigh small-scale fading, spherical-wave PA radiation,
//! in-waveguide propagation loss, and residual full-duplex self-interference.
//!
//! All gains are linear power ratios and all powers are watts; dB appears
//! only in the stored per-meter waveguide-loss constant and in tests.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::geometry::{distance, Point3};
use crate::units;
use crate::{Result, SimError};

/// Complex small-scale channel coefficient; `norm_sqr()` is the power gain.
pub type ComplexGain = Complex64;

/// Minimum PA-to-user distance accepted by the spherical-wave model, meters.
/// Closer points are near-field and indicate a mis-configured geometry.
pub const NEAR_FIELD_GUARD_M: f64 = 0.1;

/// Physical-layer constants of one simulated deployment.
///
/// Defaults reproduce the canonical measurement setup: 28 GHz carrier,
/// -90 dBm noise, 0.08 dB/m waveguide loss, 12 transmit antennas at both BS
/// and relay, path-loss exponents 2.55 (BS-relay, relay-user) and 4.0
/// (BS-user), 11 dB^2 shadowing variance, 10 dB Rician K, -85 dB residual
/// SI cancellation.
#[derive(Debug, Clone, Copy)]
pub struct ChannelParams {
    pub carrier_frequency_hz: f64,
    pub noise_power_w: f64,
    /// Path-loss exponent of the BS-relay and relay-user links.
    pub ple_relay_links: f64,
    /// Path-loss exponent of the direct BS-user link.
    pub ple_direct: f64,
    /// Variance of the zero-mean dB-domain shadowing Gaussian, dB^2.
    pub shadowing_variance_db2: f64,
    /// Rician K factor as a linear ratio.
    pub rician_k: f64,
    pub waveguide_loss_db_per_m: f64,
    /// Residual SI cancellation as a linear ratio.
    pub si_cancellation: f64,
    pub n_bs_antennas: usize,
    pub n_relay_tx_antennas: usize,
    /// When false, small-scale fading collapses to its deterministic
    /// unit-power mean (every |h| = 1).
    pub fading_enabled: bool,
    /// When false, shadowing collapses to 1.0.
    pub shadowing_enabled: bool,
}

impl ChannelParams {
    /// The canonical parameter set.
    pub fn table_defaults() -> ChannelParams {
        ChannelParams {
            carrier_frequency_hz: 28e9,
            noise_power_w: 1e-3 * 10f64.powf(-90.0 / 10.0),
            ple_relay_links: 2.55,
            ple_direct: 4.0,
            shadowing_variance_db2: 11.0,
            rician_k: 10.0,
            waveguide_loss_db_per_m: 0.08,
            si_cancellation: 10f64.powf(-8.5),
            n_bs_antennas: 12,
            n_relay_tx_antennas: 12,
            fading_enabled: true,
            shadowing_enabled: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positives = [
            (self.carrier_frequency_hz, "carrier frequency"),
            (self.noise_power_w, "noise power"),
            (self.ple_relay_links, "relay-link path-loss exponent"),
            (self.ple_direct, "direct-link path-loss exponent"),
        ];
        for (v, what) in positives {
            if !v.is_finite() || v <= 0.0 {
                return Err(SimError::OutOfRange {
                    what,
                    detail: format!("must be finite and > 0, got {v}"),
                });
            }
        }
        let non_negatives = [
            (self.shadowing_variance_db2, "shadowing variance"),
            (self.rician_k, "Rician K factor"),
            (self.waveguide_loss_db_per_m, "waveguide loss per meter"),
            (self.si_cancellation, "SI cancellation ratio"),
        ];
        for (v, what) in non_negatives {
            if !v.is_finite() || v < 0.0 {
                return Err(SimError::OutOfRange {
                    what,
                    detail: format!("must be finite and >= 0, got {v}"),
                });
            }
        }
        if self.n_bs_antennas == 0 || self.n_relay_tx_antennas == 0 {
            return Err(SimError::OutOfRange {
                what: "antenna count",
                detail: "antenna counts must be >= 1".into(),
            });
        }
        Ok(())
    }

    pub fn wavelength_m(&self) -> f64 {
        units::SPEED_OF_LIGHT / self.carrier_frequency_hz
    }
}

/// Free-space power gain at the 1 m reference distance: (lambda / 4 pi)^2.
pub fn free_space_intercept(params: &ChannelParams) -> f64 {
    let r = params.wavelength_m() / (4.0 * std::f64::consts::PI);
    r * r
}

/// Close-in path-loss gain: intercept * dist^(-exponent).
///
/// Distances below the 1 m reference are rejected; they signal a
/// mis-configured geometry rather than a physical regime this model covers.
pub fn path_loss(dist_m: f64, exponent: f64, params: &ChannelParams) -> Result<f64> {
    if !dist_m.is_finite() || dist_m < units::REFERENCE_DISTANCE_M {
        return Err(SimError::OutOfRange {
            what: "path-loss distance",
            detail: format!(
                "must be >= reference distance {} m, got {dist_m}",
                units::REFERENCE_DISTANCE_M
            ),
        });
    }
    if !exponent.is_finite() || exponent <= 0.0 {
        return Err(SimError::OutOfRange {
            what: "path-loss exponent",
            detail: format!("must be finite and > 0, got {exponent}"),
        });
    }
    Ok(free_space_intercept(params) * dist_m.powf(-exponent))
}

/// One log-normal shadowing realization as a linear power factor:
/// 10^(X/10), X ~ Normal(0, shadowing_variance_db2).
pub fn sample_shadowing<R: Rng + ?Sized>(params: &ChannelParams, rng: &mut R) -> f64 {
    if params.shadowing_variance_db2 == 0.0 {
        return 1.0;
    }
    let normal = Normal::new(0.0, params.shadowing_variance_db2.sqrt()).unwrap();
    10f64.powf(normal.sample(rng) / 10.0)
}

/// A vector of i.i.d. Rician coefficients with unit mean power:
/// h = sqrt(k/(k+1)) + sqrt(1/(k+1)) * w, w ~ CN(0, 1), common LoS phase 0.
pub fn sample_rician_vector<R: Rng + ?Sized>(
    n: usize,
    k: f64,
    rng: &mut R,
) -> Result<Vec<ComplexGain>> {
    if n == 0 {
        return Err(SimError::OutOfRange {
            what: "fading vector length",
            detail: "must be >= 1".into(),
        });
    }
    if !k.is_finite() || k < 0.0 {
        return Err(SimError::OutOfRange {
            what: "Rician K factor",
            detail: format!("must be finite and >= 0, got {k}"),
        });
    }
    let los = (k / (k + 1.0)).sqrt();
    // Each scatter component is CN(0, 1/(k+1)): per-axis sigma^2 = 1/(2(k+1)).
    let sigma = (1.0 / (2.0 * (k + 1.0))).sqrt();
    let normal = Normal::new(0.0, sigma).unwrap();
    Ok((0..n)
        .map(|_| {
            let re = los + normal.sample(rng);
            let im = normal.sample(rng);
            ComplexGain::new(re, im)
        })
        .collect())
}

/// A vector of i.i.d. unit-mean-power Rayleigh coefficients, CN(0, 1).
pub fn sample_rayleigh_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<ComplexGain>> {
    sample_rician_vector(n, 0.0, rng)
}

/// Maximum-ratio-transmission array power gain toward one receive antenna:
/// sum of |h_i|^2.
pub fn mrt_power_gain(h: &[ComplexGain]) -> Result<f64> {
    if h.is_empty() {
        return Err(SimError::OutOfRange {
            what: "MRT channel vector",
            detail: "must be non-empty".into(),
        });
    }
    Ok(h.iter().map(|c| c.norm_sqr()).sum())
}

/// Deterministic spherical-wave power gain from the active PA to a user:
/// (lambda / 4 pi)^2 / d^2.
pub fn pa_user_gain(pa: Point3, user: Point3, params: &ChannelParams) -> Result<f64> {
    let d = distance(pa, user);
    if !(d >= NEAR_FIELD_GUARD_M) {
        return Err(SimError::OutOfRange {
            what: "PA-user distance",
            detail: format!("must be >= {NEAR_FIELD_GUARD_M} m (near-field guard), got {d}"),
        });
    }
    Ok(free_space_intercept(params) / (d * d))
}

/// Complex PA-to-user coefficient carrying the propagation phase
/// e^(-j 2 pi d / lambda); its squared magnitude equals [`pa_user_gain`].
pub fn pa_user_coefficient(pa: Point3, user: Point3, params: &ChannelParams) -> Result<ComplexGain> {
    let amplitude = pa_user_gain(pa, user, params)?.sqrt();
    let d = distance(pa, user);
    let phase = -2.0 * std::f64::consts::PI * d / params.wavelength_m();
    Ok(ComplexGain::from_polar(amplitude, phase))
}

/// In-waveguide propagation gain over `arc_length_m` meters:
/// 10^(-loss_db_per_m * L / 10).
pub fn waveguide_gain(arc_length_m: f64, params: &ChannelParams) -> Result<f64> {
    if !arc_length_m.is_finite() || arc_length_m < 0.0 {
        return Err(SimError::OutOfRange {
            what: "waveguide arc length",
            detail: format!("must be finite and >= 0 m, got {arc_length_m}"),
        });
    }
    Ok(10f64.powf(-params.waveguide_loss_db_per_m * arc_length_m / 10.0))
}

/// How residual self-interference reaches the relay receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiPath {
    /// Conventional FD relay: transmit and receive antennas colocated;
    /// only the cancellation stage attenuates the leakage.
    Colocated,
    /// Radiating element physically separated from the receive antenna;
    /// cancellation and free-space propagation both apply.
    Separated,
}

/// Residual self-interference power at the relay receiver, watts.
pub fn si_power(
    relay_tx_power_w: f64,
    tx_pos: Point3,
    rx_pos: Point3,
    params: &ChannelParams,
    path: SiPath,
) -> f64 {
    let residual = relay_tx_power_w * params.si_cancellation;
    match path {
        SiPath::Colocated => residual,
        SiPath::Separated => {
            let d = distance(tx_pos, rx_pos);
            residual * free_space_intercept(params) / (d * d)
        }
    }
}
