//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the simulator library.
#[derive(Debug, Error)]
pub enum SimError {
    /// A numeric input that must be finite was NaN or infinite.
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    /// A numeric input violated its documented domain.
    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    /// Geometry that contradicts the configured system layout.
    #[error("invalid geometry: {0}")]
    Geometry(String),

    /// Config file parse or validation failure, with key/line context.
    #[error("config error ({location}): {message}")]
    Config { location: String, message: String },

    /// A Monte Carlo trial failed; the trial index is attached.
    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<SimError>,
    },

    /// A sweep grid point failed; the grid value is attached.
    #[error("sweep point {sweep_value}: {source}")]
    SweepPoint {
        sweep_value: f64,
        #[source]
        source: Box<SimError>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl SimError {
    pub(crate) fn at_trial(self, trial: u64) -> SimError {
        SimError::Trial {
            trial,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_sweep_point(self, sweep_value: f64) -> SimError {
        SimError::SweepPoint {
            sweep_value,
            source: Box::new(self),
        }
    }
}
