//! Deterministic, parallelizable Monte Carlo engine.
//!
//! Every random draw comes from a counter-based substream: one ChaCha8 stream
//! per (master seed, trial index, scheme) tuple, with stream ids carrying the
//! (trial, scheme) counter and the cipher key derived from the master seed.
//! Trials can therefore run on any number of threads in any order; results
//! are reduced in trial-index order and are bit-identical regardless of the
//! executor count.

use std::collections::BTreeMap;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::ChannelParams;
use crate::geometry::{draw_user, Point3, SystemGeometry};
use crate::schemes::{eval_scheme, PowerConfig, RelayMode, Scheme, TrialOutcome};
use crate::{Result, SimError};

/// Substream tag of the shared per-trial user drop. Scheme tags start at 1.
const USER_STREAM_TAG: u64 = 0;

/// Substream tags per trial; must exceed the largest scheme tag.
const STREAMS_PER_TRIAL: u64 = 16;

/// One evaluation point of the simulator.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub n_trials: u64,
    pub master_seed: u64,
    pub schemes: Vec<Scheme>,
    pub powers: PowerConfig,
    pub relay_mode: RelayMode,
}

impl RunSpec {
    fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(SimError::OutOfRange {
                what: "n_trials",
                detail: "must be >= 1".into(),
            });
        }
        if self.schemes.is_empty() {
            return Err(SimError::OutOfRange {
                what: "scheme set",
                detail: "must name at least one scheme".into(),
            });
        }
        if self.n_trials > u64::MAX / STREAMS_PER_TRIAL {
            return Err(SimError::OutOfRange {
                what: "n_trials",
                detail: "exceeds the substream counter space".into(),
            });
        }
        Ok(())
    }
}

/// Aggregated rate statistics of one scheme at one evaluation point.
#[derive(Debug, Clone, Copy)]
pub struct RateStatistics {
    pub mean: f64,
    pub std_error: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub n: u64,
}

/// All outcomes of one trial; `outcomes` is parallel to the spec's schemes.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub trial: u64,
    pub user: Point3,
    pub outcomes: Vec<TrialOutcome>,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Reproducible, statistically independent stream for one
/// (master seed, trial, tag) tuple.
///
/// The ChaCha key is a SplitMix64 expansion of the master seed; the 64-bit
/// ChaCha stream id is the (trial, tag) counter. Identical tuples yield
/// identical streams; distinct tuples yield distinct cipher streams.
pub fn substream(master_seed: u64, trial_index: u64, tag: u64) -> ChaCha8Rng {
    debug_assert!(tag < STREAMS_PER_TRIAL);
    let mut state = master_seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial_index * STREAMS_PER_TRIAL + tag);
    rng
}

/// Substream feeding the shared user drop of one trial.
pub fn user_substream(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    substream(master_seed, trial_index, USER_STREAM_TAG)
}

/// Substream feeding one scheme's fading draws in one trial.
pub fn scheme_substream(master_seed: u64, trial_index: u64, scheme: Scheme) -> ChaCha8Rng {
    substream(master_seed, trial_index, scheme.stream_tag())
}

/// Run every trial of `spec`, in parallel, returning records in trial order.
///
/// All schemes of a trial see the same user drop; each scheme consumes its
/// own substream, so the scheme set and its order never change any draws.
pub fn run_trials(
    spec: &RunSpec,
    geom: &SystemGeometry,
    params: &ChannelParams,
) -> Result<Vec<TrialRecord>> {
    spec.validate()?;
    params.validate()?;
    (0..spec.n_trials)
        .into_par_iter()
        .map(|trial| {
            let mut user_rng = user_substream(spec.master_seed, trial);
            let user = draw_user(&geom.service_area, &mut user_rng);
            let outcomes = spec
                .schemes
                .iter()
                .map(|&scheme| {
                    let mut rng = scheme_substream(spec.master_seed, trial, scheme);
                    eval_scheme(
                        scheme,
                        geom,
                        params,
                        spec.powers,
                        user,
                        spec.relay_mode,
                        &mut rng,
                    )
                })
                .collect::<Result<Vec<_>>>()
                .map_err(|e| e.at_trial(trial))?;
            Ok(TrialRecord {
                trial,
                user,
                outcomes,
            })
        })
        .collect()
}

/// Mean, standard error and 95% confidence interval of a rate sample,
/// accumulated in the order given.
pub fn compute_statistics(rates: &[f64]) -> RateStatistics {
    let n = rates.len();
    let mean = rates.iter().sum::<f64>() / n as f64;
    let std_error = if n > 1 {
        let ss: f64 = rates.iter().map(|r| (r - mean) * (r - mean)).sum();
        (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
    } else {
        0.0
    };
    let half = 1.96 * std_error;
    RateStatistics {
        mean,
        std_error,
        ci95_low: mean - half,
        ci95_high: mean + half,
        n: n as u64,
    }
}

/// Evaluate one point: run all trials and reduce per-scheme rate statistics
/// in trial-index order.
pub fn run_point(
    spec: &RunSpec,
    geom: &SystemGeometry,
    params: &ChannelParams,
) -> Result<BTreeMap<Scheme, RateStatistics>> {
    let records = run_trials(spec, geom, params)?;
    let mut stats = BTreeMap::new();
    for (slot, &scheme) in spec.schemes.iter().enumerate() {
        let rates: Vec<f64> = records.iter().map(|r| r.outcomes[slot].rate_bps_hz).collect();
        stats.insert(scheme, compute_statistics(&rates));
    }
    Ok(stats)
}
