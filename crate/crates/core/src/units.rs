//! Unit-safe dB/dBm/linear conversions and derived physical constants.
//!
//! `Db` (a ratio) and `Dbm` (a power referenced to 1 mW) are distinct types:
//! adding a gain in dB to a power in dBm yields dBm, while adding two dBm
//! powers has no physical meaning and does not compile. Everything downstream
//! of the configuration boundary works in linear watts and dimensionless
//! ratios; dB reappears only in reporting and tests.

use std::ops::{Add, Neg, Sub};

use crate::{Result, SimError};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Close-in reference distance anchoring all path-loss intercepts, meters.
pub const REFERENCE_DISTANCE_M: f64 = 1.0;

/// A dimensionless ratio expressed in decibels.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Db(f64);

/// A power level expressed in decibels relative to 1 mW.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Dbm(f64);

impl Db {
    pub fn new(value: f64) -> Result<Db> {
        if value.is_finite() {
            Ok(Db(value))
        } else {
            Err(SimError::NonFinite {
                what: "dB value",
                value,
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Dbm {
    pub fn new(value: f64) -> Result<Dbm> {
        if value.is_finite() {
            Ok(Dbm(value))
        } else {
            Err(SimError::NonFinite {
                what: "dBm value",
                value,
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

// Gain applied to a power is still a power; gains compose with gains.
// Dbm + Dbm is deliberately not implemented.
impl Add<Db> for Dbm {
    type Output = Dbm;
    fn add(self, gain: Db) -> Dbm {
        Dbm(self.0 + gain.0)
    }
}

impl Sub<Db> for Dbm {
    type Output = Dbm;
    fn sub(self, gain: Db) -> Dbm {
        Dbm(self.0 - gain.0)
    }
}

/// The difference of two powers is a ratio.
impl Sub for Dbm {
    type Output = Db;
    fn sub(self, other: Dbm) -> Db {
        Db(self.0 - other.0)
    }
}

impl Add for Db {
    type Output = Db;
    fn add(self, other: Db) -> Db {
        Db(self.0 + other.0)
    }
}

impl Sub for Db {
    type Output = Db;
    fn sub(self, other: Db) -> Db {
        Db(self.0 - other.0)
    }
}

impl Neg for Db {
    type Output = Db;
    fn neg(self) -> Db {
        Db(-self.0)
    }
}

/// Power in watts from a dBm level: 1e-3 · 10^(p/10).
pub fn dbm_to_watts(p: Dbm) -> f64 {
    1e-3 * 10f64.powf(p.0 / 10.0)
}

/// Dimensionless linear ratio from a dB gain: 10^(g/10).
pub fn db_to_linear(g: Db) -> f64 {
    10f64.powf(g.0 / 10.0)
}

/// dB gain from a strictly positive linear ratio.
pub fn linear_to_db(ratio: f64) -> Result<Db> {
    if !ratio.is_finite() || ratio <= 0.0 {
        return Err(SimError::OutOfRange {
            what: "linear ratio",
            detail: format!("must be finite and > 0 to express in dB, got {ratio}"),
        });
    }
    Db::new(10.0 * ratio.log10())
}

/// dBm level of a strictly positive power in watts.
pub fn watts_to_dbm(watts: f64) -> Result<Dbm> {
    if !watts.is_finite() || watts <= 0.0 {
        return Err(SimError::OutOfRange {
            what: "power in watts",
            detail: format!("must be finite and > 0 to express in dBm, got {watts}"),
        });
    }
    Dbm::new(10.0 * (watts * 1e3).log10())
}

/// Carrier wavelength in meters, c / f.
pub fn wavelength(carrier_frequency_hz: f64) -> Result<f64> {
    if !carrier_frequency_hz.is_finite() || carrier_frequency_hz <= 0.0 {
        return Err(SimError::OutOfRange {
            what: "carrier frequency",
            detail: format!("must be finite and > 0 Hz, got {carrier_frequency_hz}"),
        });
    }
    Ok(SPEED_OF_LIGHT / carrier_frequency_hz)
}
