//! Sweep orchestration: config ingestion, power/distance sweeps, CSV output
//! and per-scheme plot series.
//!
//! The config file is plain `key = value` text. Every key has a canonical
//! default; unknown or duplicated keys and out-of-range values are rejected
//! with the key name and location, so a silently ignored typo cannot skew a
//! run. The CSV writer emits one `#`-prefixed metadata line per resolved
//! config key; stripping the `# ` prefix from that block yields a config that
//! reproduces the run exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::channel::ChannelParams;
use crate::geometry::SystemGeometry;
use crate::montecarlo::{run_point, RateStatistics, RunSpec};
use crate::schemes::{PowerConfig, RelayMode, Scheme};
use crate::{Result, SimError};

/// Which quantity a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// BS and relay transmit power, dBm, swept over `power_grid_dbm`.
    Power,
    /// BS-relay distance, meters, swept over `distance_grid_m`.
    Distance,
    /// A single evaluation at the configured powers and distance.
    Point,
}

impl SweepKind {
    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Power => "power_sweep",
            SweepKind::Distance => "distance_sweep",
            SweepKind::Point => "point",
        }
    }
}

/// Which transmit power(s) a power sweep drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerSweepTarget {
    Both,
    BsOnly,
    RelayOnly,
}

impl PowerSweepTarget {
    fn name(self) -> &'static str {
        match self {
            PowerSweepTarget::Both => "both",
            PowerSweepTarget::BsOnly => "bs",
            PowerSweepTarget::RelayOnly => "relay",
        }
    }

    fn from_name(name: &str) -> Option<PowerSweepTarget> {
        match name {
            "both" => Some(PowerSweepTarget::Both),
            "bs" => Some(PowerSweepTarget::BsOnly),
            "relay" => Some(PowerSweepTarget::RelayOnly),
            _ => None,
        }
    }
}

/// Fully resolved simulator configuration; defaults reproduce the canonical
/// measurement setup.
#[derive(Debug, Clone)]
pub struct Config {
    pub carrier_frequency_ghz: f64,
    pub noise_power_dbm: f64,
    pub waveguide_loss_db_per_m: f64,
    pub bs_antennas: usize,
    pub relay_antennas: usize,
    pub path_loss_exponent_relay: f64,
    pub path_loss_exponent_direct: f64,
    pub shadowing_variance_db2: f64,
    pub rician_k_db: f64,
    pub si_cancellation_db: f64,
    pub pass_height_m: f64,
    pub area_side_m: f64,
    pub bs_relay_distance_m: f64,
    pub waveguide_span_m: f64,
    pub relay_feed_offset_m: f64,
    pub bs_power_dbm: f64,
    pub relay_power_dbm: f64,
    pub n_trials: u64,
    pub master_seed: u64,
    pub fading_enabled: bool,
    pub shadowing_enabled: bool,
    pub relay_mode: RelayMode,
    pub power_sweep_target: PowerSweepTarget,
    pub schemes: Vec<Scheme>,
    pub power_grid_dbm: Vec<f64>,
    pub distance_grid_m: Vec<f64>,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            carrier_frequency_ghz: 28.0,
            noise_power_dbm: -90.0,
            waveguide_loss_db_per_m: 0.08,
            bs_antennas: 12,
            relay_antennas: 12,
            path_loss_exponent_relay: 2.55,
            path_loss_exponent_direct: 4.0,
            shadowing_variance_db2: 11.0,
            rician_k_db: 10.0,
            si_cancellation_db: -85.0,
            pass_height_m: 3.0,
            area_side_m: 10.0,
            bs_relay_distance_m: 50.0,
            waveguide_span_m: 10.0,
            relay_feed_offset_m: 1.0,
            bs_power_dbm: 20.0,
            relay_power_dbm: 20.0,
            n_trials: 10_000,
            master_seed: 1,
            fading_enabled: true,
            shadowing_enabled: true,
            relay_mode: RelayMode::AmplifyForward,
            power_sweep_target: PowerSweepTarget::Both,
            schemes: Scheme::ALL.to_vec(),
            power_grid_dbm: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0],
            distance_grid_m: (1..=10).map(|k| (k * 10) as f64).collect(),
        }
    }
}

fn config_err(location: impl Into<String>, message: impl Into<String>) -> SimError {
    SimError::Config {
        location: location.into(),
        message: message.into(),
    }
}

impl Config {
    /// Parse `key = value` text. Omitted keys keep their defaults; unknown or
    /// repeated keys are errors.
    pub fn parse(text: &str, source: &str) -> Result<Config> {
        let mut cfg = Config::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let location = format!("{source}:{}", idx + 1);
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_err(&location, format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|k| k == key) {
                return Err(config_err(&location, format!("duplicate key `{key}`")));
            }
            seen.push(key.to_string());
            cfg.apply(key, value, &location)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str, location: &str) -> Result<()> {
        fn float(key: &str, value: &str, location: &str) -> Result<f64> {
            let v: f64 = value.parse().map_err(|_| {
                config_err(location, format!("key `{key}`: expected a number, got `{value}`"))
            })?;
            if !v.is_finite() {
                return Err(config_err(
                    location,
                    format!("key `{key}`: value must be finite, got `{value}`"),
                ));
            }
            Ok(v)
        }
        fn integer(key: &str, value: &str, location: &str) -> Result<u64> {
            value.parse().map_err(|_| {
                config_err(
                    location,
                    format!("key `{key}`: expected a non-negative integer, got `{value}`"),
                )
            })
        }
        fn boolean(key: &str, value: &str, location: &str) -> Result<bool> {
            match value {
                "true" => Ok(true),
                "false" => Ok(false),
                _ => Err(config_err(
                    location,
                    format!("key `{key}`: expected true or false, got `{value}`"),
                )),
            }
        }
        fn float_list(key: &str, value: &str, location: &str) -> Result<Vec<f64>> {
            value
                .split(',')
                .map(|item| float(key, item.trim(), location))
                .collect()
        }

        match key {
            "carrier_frequency_ghz" => self.carrier_frequency_ghz = float(key, value, location)?,
            "noise_power_dbm" => self.noise_power_dbm = float(key, value, location)?,
            "waveguide_loss_db_per_m" => {
                self.waveguide_loss_db_per_m = float(key, value, location)?
            }
            "bs_antennas" => self.bs_antennas = integer(key, value, location)? as usize,
            "relay_antennas" => self.relay_antennas = integer(key, value, location)? as usize,
            "path_loss_exponent_relay" => {
                self.path_loss_exponent_relay = float(key, value, location)?
            }
            "path_loss_exponent_direct" => {
                self.path_loss_exponent_direct = float(key, value, location)?
            }
            "shadowing_variance_db2" => self.shadowing_variance_db2 = float(key, value, location)?,
            "rician_k_db" => self.rician_k_db = float(key, value, location)?,
            "si_cancellation_db" => self.si_cancellation_db = float(key, value, location)?,
            "pass_height_m" => self.pass_height_m = float(key, value, location)?,
            "area_side_m" => self.area_side_m = float(key, value, location)?,
            "bs_relay_distance_m" => self.bs_relay_distance_m = float(key, value, location)?,
            "waveguide_span_m" => self.waveguide_span_m = float(key, value, location)?,
            "relay_feed_offset_m" => self.relay_feed_offset_m = float(key, value, location)?,
            "bs_power_dbm" => self.bs_power_dbm = float(key, value, location)?,
            "relay_power_dbm" => self.relay_power_dbm = float(key, value, location)?,
            "n_trials" => self.n_trials = integer(key, value, location)?,
            "master_seed" => self.master_seed = integer(key, value, location)?,
            "fading_enabled" => self.fading_enabled = boolean(key, value, location)?,
            "shadowing_enabled" => self.shadowing_enabled = boolean(key, value, location)?,
            "relay_mode" => {
                self.relay_mode = RelayMode::from_name(value).ok_or_else(|| {
                    config_err(
                        location,
                        format!("key `{key}`: expected af or df, got `{value}`"),
                    )
                })?
            }
            "power_sweep_target" => {
                self.power_sweep_target = PowerSweepTarget::from_name(value).ok_or_else(|| {
                    config_err(
                        location,
                        format!("key `{key}`: expected both, bs or relay, got `{value}`"),
                    )
                })?
            }
            "schemes" => {
                let mut schemes = Vec::new();
                for item in value.split(',') {
                    let name = item.trim();
                    let scheme = Scheme::from_name(name).ok_or_else(|| {
                        config_err(location, format!("key `{key}`: unknown scheme `{name}`"))
                    })?;
                    if schemes.contains(&scheme) {
                        return Err(config_err(
                            location,
                            format!("key `{key}`: scheme `{name}` listed twice"),
                        ));
                    }
                    schemes.push(scheme);
                }
                self.schemes = schemes;
            }
            "power_grid_dbm" => self.power_grid_dbm = float_list(key, value, location)?,
            "distance_grid_m" => self.distance_grid_m = float_list(key, value, location)?,
            // Echoed in CSV metadata; accepted so the block re-ingests cleanly.
            "artifact_version" => {
                if value.is_empty() {
                    return Err(config_err(location, "key `artifact_version`: empty value"));
                }
            }
            _ => {
                return Err(config_err(location, format!("unknown key `{key}`")));
            }
        }
        Ok(())
    }

    /// Apply overrides using the same keys, syntax and diagnostics as the
    /// config file, then re-validate.
    pub fn apply_overrides(&mut self, overrides: &[(&str, String)]) -> Result<()> {
        for (key, value) in overrides {
            self.apply(key, value, "command line")?;
        }
        self.validate()
    }

    fn validate(&self) -> Result<()> {
        fn range_err(key: &str, detail: String) -> SimError {
            SimError::Config {
                location: format!("key `{key}`"),
                message: detail,
            }
        }
        if self.carrier_frequency_ghz <= 0.0 {
            return Err(range_err(
                "carrier_frequency_ghz",
                format!("must be > 0, got {}", self.carrier_frequency_ghz),
            ));
        }
        if self.waveguide_loss_db_per_m < 0.0 {
            return Err(range_err(
                "waveguide_loss_db_per_m",
                format!("must be >= 0, got {}", self.waveguide_loss_db_per_m),
            ));
        }
        if self.bs_antennas == 0 || self.relay_antennas == 0 {
            return Err(range_err("bs_antennas", "antenna counts must be >= 1".into()));
        }
        if self.path_loss_exponent_relay <= 0.0 || self.path_loss_exponent_direct <= 0.0 {
            return Err(range_err(
                "path_loss_exponent_relay",
                "path-loss exponents must be > 0".into(),
            ));
        }
        if self.shadowing_variance_db2 < 0.0 {
            return Err(range_err(
                "shadowing_variance_db2",
                format!("must be >= 0, got {}", self.shadowing_variance_db2),
            ));
        }
        if self.pass_height_m <= 0.0 {
            return Err(range_err(
                "pass_height_m",
                format!("must be > 0, got {}", self.pass_height_m),
            ));
        }
        if self.area_side_m <= 0.0 {
            return Err(range_err(
                "area_side_m",
                format!("must be > 0, got {}", self.area_side_m),
            ));
        }
        if self.bs_relay_distance_m < 1.0 {
            return Err(range_err(
                "bs_relay_distance_m",
                format!("must be >= 1 m (close-in reference), got {}", self.bs_relay_distance_m),
            ));
        }
        if self.waveguide_span_m <= 0.0 {
            return Err(range_err(
                "waveguide_span_m",
                format!("must be > 0, got {}", self.waveguide_span_m),
            ));
        }
        if self.relay_feed_offset_m < 0.0 {
            return Err(range_err(
                "relay_feed_offset_m",
                format!("must be >= 0, got {}", self.relay_feed_offset_m),
            ));
        }
        if self.n_trials == 0 {
            return Err(range_err("n_trials", "must be >= 1".into()));
        }
        if self.power_grid_dbm.is_empty() {
            return Err(range_err("power_grid_dbm", "grid must be non-empty".into()));
        }
        if self.distance_grid_m.is_empty() {
            return Err(range_err("distance_grid_m", "grid must be non-empty".into()));
        }
        for &d in &self.distance_grid_m {
            if d < 1.0 {
                return Err(range_err(
                    "distance_grid_m",
                    format!("distances must be >= 1 m (close-in reference), got {d}"),
                ));
            }
        }
        if self.schemes.is_empty() {
            return Err(range_err("schemes", "must name at least one scheme".into()));
        }
        // Fixed powers must lie within the configured sweep range.
        let lo = self.power_grid_dbm.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.power_grid_dbm.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (value, key) in [
            (self.bs_power_dbm, "bs_power_dbm"),
            (self.relay_power_dbm, "relay_power_dbm"),
        ] {
            if value < lo || value > hi {
                return Err(range_err(
                    key,
                    format!("{value} dBm outside the configured sweep range [{lo}, {hi}] dBm"),
                ));
            }
        }
        Ok(())
    }

    /// Channel parameters implied by this config.
    pub fn channel_params(&self) -> ChannelParams {
        ChannelParams {
            carrier_frequency_hz: self.carrier_frequency_ghz * 1e9,
            noise_power_w: 1e-3 * 10f64.powf(self.noise_power_dbm / 10.0),
            ple_relay_links: self.path_loss_exponent_relay,
            ple_direct: self.path_loss_exponent_direct,
            shadowing_variance_db2: self.shadowing_variance_db2,
            rician_k: 10f64.powf(self.rician_k_db / 10.0),
            waveguide_loss_db_per_m: self.waveguide_loss_db_per_m,
            si_cancellation: 10f64.powf(self.si_cancellation_db / 10.0),
            n_bs_antennas: self.bs_antennas,
            n_relay_tx_antennas: self.relay_antennas,
            fading_enabled: self.fading_enabled,
            shadowing_enabled: self.shadowing_enabled,
        }
    }

    /// Canonical geometry at the configured (or an overridden) BS-relay
    /// distance.
    pub fn geometry(&self, bs_relay_distance_m: Option<f64>) -> Result<SystemGeometry> {
        SystemGeometry::canonical(
            bs_relay_distance_m.unwrap_or(self.bs_relay_distance_m),
            self.area_side_m,
            self.pass_height_m,
            self.waveguide_span_m,
            self.relay_feed_offset_m,
        )
    }

    /// Fixed transmit powers in watts.
    pub fn powers(&self) -> PowerConfig {
        PowerConfig {
            bs_power_w: 1e-3 * 10f64.powf(self.bs_power_dbm / 10.0),
            relay_power_w: 1e-3 * 10f64.powf(self.relay_power_dbm / 10.0),
        }
    }

    fn run_spec(&self, powers: PowerConfig) -> RunSpec {
        RunSpec {
            n_trials: self.n_trials,
            master_seed: self.master_seed,
            schemes: self.schemes.clone(),
            powers,
            relay_mode: self.relay_mode,
        }
    }

    /// Metadata lines, one per resolved key, in stable alphabetical order.
    fn metadata_lines(&self) -> Vec<String> {
        let grid = |g: &[f64]| {
            g.iter()
                .map(|v| format!("{v}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        let schemes = self
            .schemes
            .iter()
            .map(|s| s.name())
            .collect::<Vec<_>>()
            .join(",");
        let mut pairs: Vec<(String, String)> = vec![
            ("area_side_m".into(), format!("{}", self.area_side_m)),
            ("artifact_version".into(), env!("CARGO_PKG_VERSION").into()),
            ("bs_antennas".into(), format!("{}", self.bs_antennas)),
            ("bs_power_dbm".into(), format!("{}", self.bs_power_dbm)),
            (
                "bs_relay_distance_m".into(),
                format!("{}", self.bs_relay_distance_m),
            ),
            (
                "carrier_frequency_ghz".into(),
                format!("{}", self.carrier_frequency_ghz),
            ),
            ("distance_grid_m".into(), grid(&self.distance_grid_m)),
            ("fading_enabled".into(), format!("{}", self.fading_enabled)),
            ("master_seed".into(), format!("{}", self.master_seed)),
            ("n_trials".into(), format!("{}", self.n_trials)),
            ("noise_power_dbm".into(), format!("{}", self.noise_power_dbm)),
            (
                "pass_height_m".into(),
                format!("{}", self.pass_height_m),
            ),
            (
                "path_loss_exponent_direct".into(),
                format!("{}", self.path_loss_exponent_direct),
            ),
            (
                "path_loss_exponent_relay".into(),
                format!("{}", self.path_loss_exponent_relay),
            ),
            ("power_grid_dbm".into(), grid(&self.power_grid_dbm)),
            (
                "power_sweep_target".into(),
                self.power_sweep_target.name().into(),
            ),
            ("relay_antennas".into(), format!("{}", self.relay_antennas)),
            (
                "relay_feed_offset_m".into(),
                format!("{}", self.relay_feed_offset_m),
            ),
            ("relay_mode".into(), self.relay_mode.name().into()),
            ("relay_power_dbm".into(), format!("{}", self.relay_power_dbm)),
            ("rician_k_db".into(), format!("{}", self.rician_k_db)),
            ("schemes".into(), schemes),
            (
                "shadowing_enabled".into(),
                format!("{}", self.shadowing_enabled),
            ),
            (
                "shadowing_variance_db2".into(),
                format!("{}", self.shadowing_variance_db2),
            ),
            (
                "si_cancellation_db".into(),
                format!("{}", self.si_cancellation_db),
            ),
            (
                "waveguide_loss_db_per_m".into(),
                format!("{}", self.waveguide_loss_db_per_m),
            ),
            (
                "waveguide_span_m".into(),
                format!("{}", self.waveguide_span_m),
            ),
        ];
        pairs.sort();
        pairs
            .into_iter()
            .map(|(k, v)| format!("# {k} = {v}"))
            .collect()
    }
}

/// Read and resolve a config file.
pub fn load_config(path: &Path) -> Result<Config> {
    let text = fs::read_to_string(path)?;
    Config::parse(&text, &path.display().to_string())
}

/// One output row: statistics of one scheme at one grid value.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub scheme: Scheme,
    pub stats: RateStatistics,
}

/// A completed sweep, carrying the fully resolved config it came from.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub kind: SweepKind,
    pub rows: Vec<SweepRow>,
    pub config: Config,
}

impl SweepResult {
    /// Statistics for one (grid value, scheme) pair, if present.
    pub fn stats(&self, sweep_value: f64, scheme: Scheme) -> Option<&RateStatistics> {
        self.rows
            .iter()
            .find(|r| r.sweep_value == sweep_value && r.scheme == scheme)
            .map(|r| &r.stats)
    }
}

/// Execute a sweep. Power sweeps drive the configured power target(s)
/// jointly across `power_grid_dbm`; distance sweeps rebuild the geometry at
/// each `distance_grid_m` value with powers fixed from the config; `point`
/// evaluates the configured powers and distance once.
pub fn run_sweep(config: &Config, kind: SweepKind) -> Result<SweepResult> {
    let params = config.channel_params();
    let mut grid: Vec<f64> = match kind {
        SweepKind::Power => config.power_grid_dbm.clone(),
        SweepKind::Distance => config.distance_grid_m.clone(),
        SweepKind::Point => vec![config.bs_power_dbm],
    };
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut rows = Vec::with_capacity(grid.len() * config.schemes.len());
    for &value in &grid {
        let (geom, powers) = match kind {
            SweepKind::Power => {
                let swept = 1e-3 * 10f64.powf(value / 10.0);
                let fixed = config.powers();
                let powers = match config.power_sweep_target {
                    PowerSweepTarget::Both => PowerConfig {
                        bs_power_w: swept,
                        relay_power_w: swept,
                    },
                    PowerSweepTarget::BsOnly => PowerConfig {
                        bs_power_w: swept,
                        relay_power_w: fixed.relay_power_w,
                    },
                    PowerSweepTarget::RelayOnly => PowerConfig {
                        bs_power_w: fixed.bs_power_w,
                        relay_power_w: swept,
                    },
                };
                (config.geometry(None)?, powers)
            }
            SweepKind::Distance => (config.geometry(Some(value))?, config.powers()),
            SweepKind::Point => (config.geometry(None)?, config.powers()),
        };
        let spec = config.run_spec(powers);
        let stats: BTreeMap<Scheme, RateStatistics> =
            run_point(&spec, &geom, &params).map_err(|e| e.at_sweep_point(value))?;
        let mut schemes: Vec<Scheme> = config.schemes.clone();
        schemes.sort_by_key(|s| s.name());
        for scheme in schemes {
            rows.push(SweepRow {
                sweep_value: value,
                scheme,
                stats: stats[&scheme],
            });
        }
    }
    Ok(SweepResult {
        kind,
        rows,
        config: config.clone(),
    })
}

/// Fixed-width decimal formatting with 9 significant digits.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (8 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

const CSV_HEADER: &str = "sweep_value,scheme,mean_rate_bps_hz,ci95_low,ci95_high,n_trials";

fn render_csv(result: &SweepResult) -> String {
    let mut out = String::new();
    for line in result.config.metadata_lines() {
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &result.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_sig9(row.sweep_value),
            row.scheme.name(),
            format_sig9(row.stats.mean),
            format_sig9(row.stats.ci95_low),
            format_sig9(row.stats.ci95_high),
            row.stats.n
        );
    }
    out
}

/// Write the sweep CSV: a `#`-prefixed metadata block (resolved config and
/// seed) followed by the header and one row per (grid value, scheme).
/// Byte-stable across runs with equal inputs.
pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    fs::write(path, render_csv(result))?;
    Ok(())
}

/// Write one whitespace-delimited series file per scheme
/// (`<stem>_<scheme>.dat`, columns: sweep_value mean ci_low ci_high) and
/// return the paths written, in scheme-name order.
pub fn emit_plot_data(result: &SweepResult, out_dir: &Path, stem: &str) -> Result<Vec<PathBuf>> {
    let mut schemes: Vec<Scheme> = result.config.schemes.clone();
    schemes.sort_by_key(|s| s.name());
    let mut written = Vec::with_capacity(schemes.len());
    for scheme in schemes {
        let mut out = String::new();
        for row in result.rows.iter().filter(|r| r.scheme == scheme) {
            let _ = writeln!(
                out,
                "{} {} {} {}",
                format_sig9(row.sweep_value),
                format_sig9(row.stats.mean),
                format_sig9(row.stats.ci95_low),
                format_sig9(row.stats.ci95_high),
            );
        }
        let path = out_dir.join(format!("{stem}_{}.dat", scheme.name()));
        fs::write(&path, out)?;
        written.push(path);
    }
    Ok(written)
}
