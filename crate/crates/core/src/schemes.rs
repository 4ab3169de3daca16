//! The five end-to-end transmission schemes under comparison.
//!
//! Each evaluator maps (geometry, channel parameters, transmit powers, one
//! user drop, one fading realization) to per-hop SINRs and an achieved
//! spectral efficiency in bits/s/Hz. Draw order within an evaluator is part
//! of its determinism contract: hop-1 small-scale fading first, then hop-1
//! shadowing, then hop-2 fading, then hop-2 shadowing; disabled fading or
//! shadowing consumes no draws.

use rand::Rng;

use crate::channel::{
    mrt_power_gain, pa_user_gain, path_loss, sample_rayleigh_vector, sample_rician_vector,
    sample_shadowing, si_power, waveguide_gain, ChannelParams, SiPath,
};
use crate::geometry::{arc_length_to_pa, distance, pa_position_for_user, Point3, SystemGeometry};
use crate::Result;

/// The transmission schemes of the comparative study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    /// Wirelessly fed waveguide: FD relay receives from the BS and forwards
    /// into the waveguide; one PA radiates to the user.
    WiPass,
    /// Wired-fed waveguide running from the BS across the service area.
    Pass,
    /// Fixed-antenna FD relay without self-interference.
    FdRelayIdeal,
    /// Fixed-antenna FD relay with residual self-interference.
    FdRelayPractical,
    /// Direct BS-user transmission over a Rayleigh channel.
    DirectConventional,
}

impl Scheme {
    /// All five schemes, in presentation order.
    pub const ALL: [Scheme; 5] = [
        Scheme::WiPass,
        Scheme::Pass,
        Scheme::FdRelayIdeal,
        Scheme::FdRelayPractical,
        Scheme::DirectConventional,
    ];

    /// Stable name used in CSV output, config files and the CLI.
    pub fn name(self) -> &'static str {
        match self {
            Scheme::WiPass => "wipass",
            Scheme::Pass => "pass",
            Scheme::FdRelayIdeal => "fd_relay_ideal",
            Scheme::FdRelayPractical => "fd_relay_practical",
            Scheme::DirectConventional => "direct",
        }
    }

    pub fn from_name(name: &str) -> Option<Scheme> {
        Scheme::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Stable substream tag; 0 is reserved for the per-trial user drop.
    pub(crate) fn stream_tag(self) -> u64 {
        match self {
            Scheme::WiPass => 1,
            Scheme::Pass => 2,
            Scheme::FdRelayIdeal => 3,
            Scheme::FdRelayPractical => 4,
            Scheme::DirectConventional => 5,
        }
    }
}

/// How the relay combines its two hops into an end-to-end rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelayMode {
    /// Variable-gain amplify-and-forward.
    AmplifyForward,
    /// Decode-and-forward: the weaker hop limits the rate.
    DecodeForward,
}

impl RelayMode {
    pub fn name(self) -> &'static str {
        match self {
            RelayMode::AmplifyForward => "af",
            RelayMode::DecodeForward => "df",
        }
    }

    pub fn from_name(name: &str) -> Option<RelayMode> {
        match name {
            "af" => Some(RelayMode::AmplifyForward),
            "df" => Some(RelayMode::DecodeForward),
            _ => None,
        }
    }

    fn combine(self, g1: f64, g2: f64) -> f64 {
        match self {
            RelayMode::AmplifyForward => af_end_to_end_sinr(g1, g2),
            RelayMode::DecodeForward => g1.min(g2),
        }
    }
}

/// Transmit powers of one evaluation point, watts.
#[derive(Debug, Clone, Copy)]
pub struct PowerConfig {
    pub bs_power_w: f64,
    pub relay_power_w: f64,
}

/// One Monte Carlo realization of one scheme.
#[derive(Debug, Clone, Copy)]
pub struct TrialOutcome {
    pub scheme: Scheme,
    /// First-hop (or only-hop) SINR, linear; 0 if unused.
    pub gamma_hop1: f64,
    /// Second-hop SINR, linear; 0 if unused.
    pub gamma_hop2: f64,
    /// Spectral efficiency, bits/s/Hz.
    pub rate_bps_hz: f64,
}

/// End-to-end SINR of a variable-gain amplify-and-forward relay:
/// g1 g2 / (g1 + g2 + 1).
pub fn af_end_to_end_sinr(g1: f64, g2: f64) -> f64 {
    if g1 == 0.0 || g2 == 0.0 {
        return 0.0;
    }
    g1 * g2 / (g1 + g2 + 1.0)
}

fn rate_from_sinr(gamma: f64) -> f64 {
    (1.0 + gamma).log2()
}

/// Hop-1 MRT array gain: Rician draws when fading is enabled, otherwise the
/// deterministic unit-power mean (gain = number of antennas).
fn bs_array_gain_rician<R: Rng + ?Sized>(params: &ChannelParams, rng: &mut R) -> Result<f64> {
    if params.fading_enabled {
        let h = sample_rician_vector(params.n_bs_antennas, params.rician_k, rng)?;
        mrt_power_gain(&h)
    } else {
        Ok(params.n_bs_antennas as f64)
    }
}

fn array_gain_rayleigh<R: Rng + ?Sized>(n: usize, params: &ChannelParams, rng: &mut R) -> Result<f64> {
    if params.fading_enabled {
        let h = sample_rayleigh_vector(n, rng)?;
        mrt_power_gain(&h)
    } else {
        Ok(n as f64)
    }
}

fn shadowing_factor<R: Rng + ?Sized>(params: &ChannelParams, rng: &mut R) -> f64 {
    if params.shadowing_enabled {
        sample_shadowing(params, rng)
    } else {
        1.0
    }
}

/// Wi-PASS: BS -> relay receive antenna (wireless, Rician, MRT, shadowed,
/// with separated-path residual SI), then relay -> waveguide -> PA -> user
/// (deterministic LoS).
pub fn eval_wipass<R: Rng + ?Sized>(
    geom: &SystemGeometry,
    params: &ChannelParams,
    powers: PowerConfig,
    user: Point3,
    relay_mode: RelayMode,
    rng: &mut R,
) -> Result<TrialOutcome> {
    let array = bs_array_gain_rician(params, rng)?;
    let shadow = shadowing_factor(params, rng);

    let pa = pa_position_for_user(&geom.waveguide, user);
    let si = si_power(
        powers.relay_power_w,
        pa,
        geom.relay_rx_position,
        params,
        SiPath::Separated,
    );
    let hop1_signal = powers.bs_power_w
        * array
        * path_loss(geom.bs_relay_distance_m, params.ple_relay_links, params)?
        * shadow;
    let gamma1 = hop1_signal / (params.noise_power_w + si);

    let arc = arc_length_to_pa(&geom.waveguide, pa)?;
    let gamma2 = powers.relay_power_w * waveguide_gain(arc, params)? * pa_user_gain(pa, user, params)?
        / params.noise_power_w;

    let combined = relay_mode.combine(gamma1, gamma2);
    Ok(TrialOutcome {
        scheme: Scheme::WiPass,
        gamma_hop1: gamma1,
        gamma_hop2: gamma2,
        rate_bps_hz: rate_from_sinr(combined),
    })
}

/// Wired PASS: the waveguide runs from the BS to the service area, so the
/// feed-to-PA arc is the BS-relay distance plus the in-area offset. Single
/// deterministic LoS hop: no fading, no shadowing, no SI.
pub fn eval_pass<R: Rng + ?Sized>(
    geom: &SystemGeometry,
    params: &ChannelParams,
    powers: PowerConfig,
    user: Point3,
    _rng: &mut R,
) -> Result<TrialOutcome> {
    let pa = pa_position_for_user(&geom.waveguide, user);
    let arc = geom.bs_relay_distance_m + arc_length_to_pa(&geom.waveguide, pa)?;
    let gamma = powers.bs_power_w * waveguide_gain(arc, params)? * pa_user_gain(pa, user, params)?
        / params.noise_power_w;
    Ok(TrialOutcome {
        scheme: Scheme::Pass,
        gamma_hop1: gamma,
        gamma_hop2: 0.0,
        rate_bps_hz: rate_from_sinr(gamma),
    })
}

/// Fixed-antenna FD relay. Hop 1 as in Wi-PASS but with colocated SI
/// (`ideal` zeroes it); hop 2 is a Rayleigh MRT link to the user with the
/// relay-link exponent and shadowing (relay-user LoS blocked).
pub fn eval_fd_relay<R: Rng + ?Sized>(
    geom: &SystemGeometry,
    params: &ChannelParams,
    powers: PowerConfig,
    user: Point3,
    ideal: bool,
    relay_mode: RelayMode,
    rng: &mut R,
) -> Result<TrialOutcome> {
    let array1 = bs_array_gain_rician(params, rng)?;
    let shadow1 = shadowing_factor(params, rng);
    let array2 = array_gain_rayleigh(params.n_relay_tx_antennas, params, rng)?;
    let shadow2 = shadowing_factor(params, rng);

    let si = if ideal {
        0.0
    } else {
        si_power(
            powers.relay_power_w,
            geom.relay_rx_position,
            geom.relay_rx_position,
            params,
            SiPath::Colocated,
        )
    };
    let hop1_signal = powers.bs_power_w
        * array1
        * path_loss(geom.bs_relay_distance_m, params.ple_relay_links, params)?
        * shadow1;
    let gamma1 = hop1_signal / (params.noise_power_w + si);

    let d = distance(geom.relay_rx_position, user);
    let gamma2 = powers.relay_power_w * array2 * path_loss(d, params.ple_relay_links, params)?
        * shadow2
        / params.noise_power_w;

    let combined = relay_mode.combine(gamma1, gamma2);
    Ok(TrialOutcome {
        scheme: if ideal {
            Scheme::FdRelayIdeal
        } else {
            Scheme::FdRelayPractical
        },
        gamma_hop1: gamma1,
        gamma_hop2: gamma2,
        rate_bps_hz: rate_from_sinr(combined),
    })
}

/// Direct BS-user transmission: Rayleigh MRT link with the steep direct-path
/// exponent and shadowing.
pub fn eval_direct<R: Rng + ?Sized>(
    geom: &SystemGeometry,
    params: &ChannelParams,
    powers: PowerConfig,
    user: Point3,
    rng: &mut R,
) -> Result<TrialOutcome> {
    let array = array_gain_rayleigh(params.n_bs_antennas, params, rng)?;
    let shadow = shadowing_factor(params, rng);
    let d = distance(geom.bs_position, user);
    let gamma = powers.bs_power_w * array * path_loss(d, params.ple_direct, params)? * shadow
        / params.noise_power_w;
    Ok(TrialOutcome {
        scheme: Scheme::DirectConventional,
        gamma_hop1: gamma,
        gamma_hop2: 0.0,
        rate_bps_hz: rate_from_sinr(gamma),
    })
}

/// Evaluate one scheme for one trial.
pub fn eval_scheme<R: Rng + ?Sized>(
    scheme: Scheme,
    geom: &SystemGeometry,
    params: &ChannelParams,
    powers: PowerConfig,
    user: Point3,
    relay_mode: RelayMode,
    rng: &mut R,
) -> Result<TrialOutcome> {
    match scheme {
        Scheme::WiPass => eval_wipass(geom, params, powers, user, relay_mode, rng),
        Scheme::Pass => eval_pass(geom, params, powers, user, rng),
        Scheme::FdRelayIdeal => eval_fd_relay(geom, params, powers, user, true, relay_mode, rng),
        Scheme::FdRelayPractical => {
            eval_fd_relay(geom, params, powers, user, false, relay_mode, rng)
        }
        Scheme::DirectConventional => eval_direct(geom, params, powers, user, rng),
    }
}
