//! Acceptance suite: each test exercises one release criterion end to end at
//! its stated tolerance and prints one `[criterion N] PASS/FAIL` line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;

use wipass_sim::channel::{self, ChannelParams, SiPath};
use wipass_sim::experiment::Config;
use wipass_sim::geometry::{self, Point3, SystemGeometry};
use wipass_sim::montecarlo::{self, compute_statistics, RateStatistics, RunSpec};
use wipass_sim::schemes::{self, PowerConfig, RelayMode, Scheme};

/// Fixed master seed of the whole acceptance run.
const ACCEPTANCE_SEED: u64 = 0x5EED;

const TRIALS: u64 = 20_000;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[{criterion}] {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion} failed: {detail}");
}

fn canonical_setup(distance_m: f64) -> (SystemGeometry, ChannelParams) {
    let config = Config::default();
    (
        config.geometry(Some(distance_m)).unwrap(),
        config.channel_params(),
    )
}

fn dbm_to_w(p: f64) -> f64 {
    1e-3 * 10f64.powf(p / 10.0)
}

fn run_all_schemes(
    distance_m: f64,
    power_dbm: f64,
    n_trials: u64,
) -> BTreeMap<Scheme, RateStatistics> {
    let (geom, params) = canonical_setup(distance_m);
    let spec = RunSpec {
        n_trials,
        master_seed: ACCEPTANCE_SEED,
        schemes: Scheme::ALL.to_vec(),
        powers: PowerConfig {
            bs_power_w: dbm_to_w(power_dbm),
            relay_power_w: dbm_to_w(power_dbm),
        },
        relay_mode: RelayMode::AmplifyForward,
    };
    montecarlo::run_point(&spec, &geom, &params).unwrap()
}

/// Strict ordering with non-overlapping 95% confidence intervals.
fn separated_above(hi: &RateStatistics, lo: &RateStatistics) -> bool {
    hi.ci95_low > lo.ci95_high
}

#[test]
fn criterion_1_power_point_ordering() {
    let start = Instant::now();
    let stats = run_all_schemes(50.0, 20.0, TRIALS);
    let elapsed = start.elapsed().as_secs_f64();

    let pass = stats[&Scheme::Pass];
    let wipass = stats[&Scheme::WiPass];
    let fd_ideal = stats[&Scheme::FdRelayIdeal];
    let fd_practical = stats[&Scheme::FdRelayPractical];
    let direct = stats[&Scheme::DirectConventional];

    let mut ok = true;
    ok &= separated_above(&pass, &wipass);
    ok &= separated_above(&wipass, &fd_practical);
    ok &= separated_above(&fd_ideal, &fd_practical);
    for relayed in [&wipass, &pass, &fd_ideal, &fd_practical] {
        ok &= separated_above(relayed, &direct);
    }
    let wipass_vs_ideal = wipass.mean - fd_ideal.mean;
    ok &= wipass_vs_ideal >= -0.1;
    ok &= elapsed < 30.0;

    report(
        "criterion 1",
        ok,
        &format!(
            "pass {:.4} > wipass {:.4} > fd_practical {:.4}; fd_ideal {:.4} > fd_practical; \
             all relayed > direct {:.4}; wipass - fd_ideal = {wipass_vs_ideal:+.4} >= -0.1; \
             runtime {elapsed:.2} s < 30 s",
            pass.mean, wipass.mean, fd_practical.mean, fd_ideal.mean, direct.mean
        ),
    );
}

#[test]
fn criterion_2_distance_trends() {
    let grid: Vec<f64> = (1..=10).map(|k| (k * 10) as f64).collect();
    let mut stats_by_d: BTreeMap<u64, BTreeMap<Scheme, RateStatistics>> = BTreeMap::new();
    let mut pass_snr_db_mean: BTreeMap<u64, f64> = BTreeMap::new();

    for &d in &grid {
        let (geom, params) = canonical_setup(d);
        let spec = RunSpec {
            n_trials: TRIALS,
            master_seed: ACCEPTANCE_SEED,
            schemes: Scheme::ALL.to_vec(),
            powers: PowerConfig {
                bs_power_w: dbm_to_w(20.0),
                relay_power_w: dbm_to_w(20.0),
            },
            relay_mode: RelayMode::AmplifyForward,
        };
        let records = montecarlo::run_trials(&spec, &geom, &params).unwrap();
        let mut per_scheme = BTreeMap::new();
        for (slot, &scheme) in spec.schemes.iter().enumerate() {
            let rates: Vec<f64> = records.iter().map(|r| r.outcomes[slot].rate_bps_hz).collect();
            per_scheme.insert(scheme, compute_statistics(&rates));
        }
        let pass_slot = spec.schemes.iter().position(|&s| s == Scheme::Pass).unwrap();
        let snr_db: f64 = records
            .iter()
            .map(|r| 10.0 * r.outcomes[pass_slot].gamma_hop1.log10())
            .sum::<f64>()
            / records.len() as f64;
        stats_by_d.insert(d as u64, per_scheme);
        pass_snr_db_mean.insert(d as u64, snr_db);
    }

    // (a) PASS strictly decreasing; accumulated waveguide loss shows up in
    // full: mean SNR drop over the 90 m span >= 0.08 dB/m * 90 m.
    let mut a_ok = true;
    let pass_means: Vec<f64> = grid
        .iter()
        .map(|&d| stats_by_d[&(d as u64)][&Scheme::Pass].mean)
        .collect();
    for pair in pass_means.windows(2) {
        a_ok &= pair[1] < pair[0];
    }
    let snr_drop_db = pass_snr_db_mean[&10] - pass_snr_db_mean[&100];
    a_ok &= snr_drop_db >= 0.08 * 90.0 - 1e-6;

    // (b) The direct link has the largest relative rate drop from 10 to 100 m.
    let relative_drop = |scheme: Scheme| {
        let near = stats_by_d[&10][&scheme].mean;
        let far = stats_by_d[&100][&scheme].mean;
        (near - far) / near
    };
    let direct_drop = relative_drop(Scheme::DirectConventional);
    let mut b_ok = true;
    for scheme in [
        Scheme::WiPass,
        Scheme::Pass,
        Scheme::FdRelayIdeal,
        Scheme::FdRelayPractical,
    ] {
        b_ok &= direct_drop > relative_drop(scheme);
    }

    // (c) Wi-PASS and PASS above both FD baselines at every grid point.
    // The Wi-PASS vs FD-ideal pair is the tight one (criterion 1 allows a
    // 0.1 modeling slack at D=50); at the pinned seed it holds strictly.
    let mut c_ok = true;
    let mut min_gap = f64::INFINITY;
    let mut aggregate_gap = 0.0;
    for &d in &grid {
        let s = &stats_by_d[&(d as u64)];
        let wipass = s[&Scheme::WiPass];
        let pass = s[&Scheme::Pass];
        let fd_ideal = s[&Scheme::FdRelayIdeal];
        let fd_practical = s[&Scheme::FdRelayPractical];
        c_ok &= pass.mean > fd_ideal.mean && pass.mean > fd_practical.mean;
        c_ok &= wipass.mean > fd_practical.mean;
        c_ok &= wipass.mean > fd_ideal.mean;
        let gap = wipass.mean - fd_ideal.mean;
        min_gap = min_gap.min(gap);
        aggregate_gap += gap;
    }
    aggregate_gap /= grid.len() as f64;
    c_ok &= aggregate_gap > 0.0;

    report(
        "criterion 2",
        a_ok && b_ok && c_ok,
        &format!(
            "(a) PASS strictly decreasing, SNR drop {snr_drop_db:.4} dB >= 7.2 dB [{a_ok}]; \
             (b) direct relative drop {direct_drop:.4} largest [{b_ok}]; \
             (c) Wi-PASS/PASS above FD baselines at all 10 points, wipass - fd_ideal \
             min gap {min_gap:+.5}, grid mean {aggregate_gap:+.5} [{c_ok}]"
        ),
    );
}

#[test]
fn criterion_3_si_budget() {
    let (geom, params) = canonical_setup(50.0);
    let relay_power_w = dbm_to_w(20.0);

    // Conventional residual: 20 dBm - 85 dB = -65 dBm, tolerance 0.01 dB.
    let conventional = channel::si_power(
        relay_power_w,
        geom.relay_rx_position,
        geom.relay_rx_position,
        &params,
        SiPath::Colocated,
    );
    let conventional_dbm = 10.0 * (conventional * 1e3).log10();
    let conv_ok = (conventional_dbm - (-65.0)).abs() < 0.01;

    // Wi-PASS residual below -120 dBm for every PA position: scan the
    // span at 1 mm pitch.
    let mut worst_dbm = f64::NEG_INFINITY;
    let feed = geom.waveguide.feed_point();
    for k in 0..=10_000 {
        let pa = Point3::new(feed.x + k as f64 * 1e-3, feed.y, feed.z).unwrap();
        let si = channel::si_power(
            relay_power_w,
            pa,
            geom.relay_rx_position,
            &params,
            SiPath::Separated,
        );
        worst_dbm = worst_dbm.max(10.0 * (si * 1e3).log10());
    }
    let sep_ok = worst_dbm < -120.0;

    report(
        "criterion 3",
        conv_ok && sep_ok,
        &format!(
            "conventional residual {conventional_dbm:.4} dBm (= -65 within 0.01 dB); \
             worst Wi-PASS residual {worst_dbm:.4} dBm < -120 dBm"
        ),
    );
}

/// Straight-dB link-budget oracle, written independently of the simulator's
/// linear-domain pipeline. All quantities in dB/dBm until the final combine.
mod oracle {
    pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

    pub struct Budget {
        pub frequency_hz: f64,
        pub noise_dbm: f64,
        pub waveguide_db_per_m: f64,
        pub bs_power_dbm: f64,
        pub relay_power_dbm: f64,
        pub n_bs_antennas: f64,
        pub ple_relay: f64,
        pub si_cancellation_db: f64,
    }

    pub fn friis_1m_db(frequency_hz: f64) -> f64 {
        let lambda = SPEED_OF_LIGHT / frequency_hz;
        20.0 * (lambda / (4.0 * std::f64::consts::PI)).log10()
    }

    fn dist(a: (f64, f64, f64), b: (f64, f64, f64)) -> f64 {
        ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2) + (a.2 - b.2).powi(2)).sqrt()
    }

    /// Closest waveguide point to the user: waveguide along +x at y=5, z=3,
    /// x in [0, 10].
    fn pa_for(user: (f64, f64, f64)) -> (f64, f64, f64) {
        (user.0.clamp(0.0, 10.0), 5.0, 3.0)
    }

    /// PASS SINR in dB for a user in the canonical layout at BS distance `d`.
    pub fn pass_sinr_db(b: &Budget, bs_relay_distance_m: f64, user: (f64, f64, f64)) -> f64 {
        let pa = pa_for(user);
        let arc = bs_relay_distance_m + pa.0;
        let spreading = 20.0 * dist(pa, user).log10();
        b.bs_power_dbm - b.waveguide_db_per_m * arc + friis_1m_db(b.frequency_hz) - spreading
            - b.noise_dbm
    }

    /// Wi-PASS per-hop SINRs in dB (deterministic mode: MRT gain = antenna
    /// count, no fading, no shadowing). Relay receive antenna at (-1, 5, 3).
    pub fn wipass_sinr_db(
        b: &Budget,
        bs_relay_distance_m: f64,
        user: (f64, f64, f64),
    ) -> (f64, f64) {
        let pa = pa_for(user);
        let rx = (-1.0, 5.0, 3.0);
        // Residual SI in dBm: cancellation plus free-space separation loss.
        let si_dbm = b.relay_power_dbm + b.si_cancellation_db + friis_1m_db(b.frequency_hz)
            - 20.0 * dist(pa, rx).log10();
        // Hop-1 noise floor: noise + SI summed in milliwatts.
        let floor_mw = 10f64.powf(b.noise_dbm / 10.0) + 10f64.powf(si_dbm / 10.0);
        let hop1 = b.bs_power_dbm + 10.0 * b.n_bs_antennas.log10() + friis_1m_db(b.frequency_hz)
            - 10.0 * b.ple_relay * bs_relay_distance_m.log10()
            - 10.0 * floor_mw.log10();
        let hop2 = b.relay_power_dbm - b.waveguide_db_per_m * pa.0
            + friis_1m_db(b.frequency_hz)
            - 20.0 * dist(pa, user).log10()
            - b.noise_dbm;
        (hop1, hop2)
    }

    pub fn rate_from_db(sinr_db: f64) -> f64 {
        (1.0 + 10f64.powf(sinr_db / 10.0)).log2()
    }

    pub fn af_rate_from_db(g1_db: f64, g2_db: f64) -> f64 {
        let g1 = 10f64.powf(g1_db / 10.0);
        let g2 = 10f64.powf(g2_db / 10.0);
        (1.0 + g1 * g2 / (g1 + g2 + 1.0)).log2()
    }
}

#[test]
fn criterion_4_link_budget_oracle_equivalence() {
    let (geom, mut params) = canonical_setup(50.0);
    params.fading_enabled = false;
    params.shadowing_enabled = false;
    let powers = PowerConfig {
        bs_power_w: dbm_to_w(20.0),
        relay_power_w: dbm_to_w(20.0),
    };
    let budget = oracle::Budget {
        frequency_hz: 28e9,
        noise_dbm: -90.0,
        waveguide_db_per_m: 0.08,
        bs_power_dbm: 20.0,
        relay_power_dbm: 20.0,
        n_bs_antennas: 12.0,
        ple_relay: 2.55,
        si_cancellation_db: -85.0,
    };

    // The worked link budgets the oracle itself must reproduce.
    let (_, hop2_center) = oracle::wipass_sinr_db(&budget, 50.0, (5.0, 5.0, 0.0));
    let pass_center = oracle::pass_sinr_db(&budget, 50.0, (5.0, 5.0, 0.0));
    let mut ok = (hop2_center - 38.67).abs() < 0.005;
    ok &= (pass_center - 34.67).abs() < 0.005;

    let users = [
        (5.0, 5.0, 0.0),
        (2.0, 3.0, 0.0),
        (0.0, 0.0, 0.0),
        (10.0, 10.0, 0.0),
        (7.5, 2.5, 0.0),
    ];
    let mut worst = 0.0f64;
    for &(x, y, z) in &users {
        let user = Point3::new(x, y, z).unwrap();
        let mut rng = montecarlo::scheme_substream(ACCEPTANCE_SEED, 0, Scheme::Pass);
        let pass_impl = schemes::eval_pass(&geom, &params, powers, user, &mut rng)
            .unwrap()
            .rate_bps_hz;
        let pass_oracle = oracle::rate_from_db(oracle::pass_sinr_db(&budget, 50.0, (x, y, z)));
        worst = worst.max((pass_impl - pass_oracle).abs());

        let mut rng = montecarlo::scheme_substream(ACCEPTANCE_SEED, 0, Scheme::WiPass);
        let wipass_impl = schemes::eval_wipass(
            &geom,
            &params,
            powers,
            user,
            RelayMode::AmplifyForward,
            &mut rng,
        )
        .unwrap()
        .rate_bps_hz;
        let (g1_db, g2_db) = oracle::wipass_sinr_db(&budget, 50.0, (x, y, z));
        let wipass_oracle = oracle::af_rate_from_db(g1_db, g2_db);
        worst = worst.max((wipass_impl - wipass_oracle).abs());
    }
    ok &= worst <= 1e-9;

    report(
        "criterion 4",
        ok,
        &format!(
            "oracle hop-2 {hop2_center:.4} dB (38.67), PASS {pass_center:.4} dB (34.67); \
             max |impl - oracle| = {worst:.3e} <= 1e-9 bits/s/Hz over 5 users"
        ),
    );
}

#[test]
fn criterion_5_statistical_properties() {
    let params = ChannelParams::table_defaults();

    // Fading power normalization within +-0.5% at 1e6 entry draws.
    let mut norm_ok = true;
    let mut norm_detail = String::new();
    for (label, k, tag) in [("k=0", 0.0, 1u64), ("k=10", 10.0, 2), ("k=1e12", 1e12, 3)] {
        let mut rng = montecarlo::substream(ACCEPTANCE_SEED, 0, tag);
        let mut acc = 0.0;
        let n = 1_000_000usize;
        for _ in 0..n / 8 {
            let h = channel::sample_rician_vector(8, k, &mut rng).unwrap();
            acc += h.iter().map(|c| c.norm_sqr()).sum::<f64>();
        }
        let mean = acc / n as f64;
        norm_ok &= (mean - 1.0).abs() < 0.005;
        norm_detail.push_str(&format!("{label}:{mean:.4} "));
    }
    {
        let mut rng = montecarlo::substream(ACCEPTANCE_SEED, 0, 4);
        let mut acc = 0.0;
        let n = 1_000_000usize;
        for _ in 0..n / 8 {
            let h = channel::sample_rayleigh_vector(8, &mut rng).unwrap();
            acc += h.iter().map(|c| c.norm_sqr()).sum::<f64>();
        }
        let mean = acc / n as f64;
        norm_ok &= (mean - 1.0).abs() < 0.005;
        norm_detail.push_str(&format!("rayleigh:{mean:.4}"));
    }

    // Shadowing dB-domain variance 11 +- 0.1 at 1e6 draws.
    let mut rng = montecarlo::substream(ACCEPTANCE_SEED, 0, 5);
    let n = 1_000_000usize;
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..n {
        let x_db = 10.0 * channel::sample_shadowing(&params, &mut rng).log10();
        sum += x_db;
        sum_sq += x_db * x_db;
    }
    let mean_db = sum / n as f64;
    let var_db = sum_sq / n as f64 - mean_db * mean_db;
    let shadow_ok = (var_db - 11.0).abs() < 0.1;

    // AF bound on 1e5 random SINR pairs.
    let mut rng = montecarlo::substream(ACCEPTANCE_SEED, 0, 6);
    let mut af_ok = true;
    for _ in 0..100_000 {
        let g1 = rng.gen::<f64>() * 10f64.powf(rng.gen::<f64>() * 6.0);
        let g2 = rng.gen::<f64>() * 10f64.powf(rng.gen::<f64>() * 6.0);
        af_ok &= schemes::af_end_to_end_sinr(g1, g2) <= g1.min(g2);
    }

    // PA placement no worse than a 1 mm exhaustive scan on 1000 users.
    let (geom, _) = canonical_setup(50.0);
    let mut rng = montecarlo::substream(ACCEPTANCE_SEED, 0, 7);
    let mut place_ok = true;
    for _ in 0..1000 {
        let user = geometry::draw_user(&geom.service_area, &mut rng);
        let chosen = geometry::distance(geometry::pa_position_for_user(&geom.waveguide, user), user);
        let mut best = f64::INFINITY;
        for k in 0..=10_000 {
            let cand = Point3::new(k as f64 * 1e-3, 5.0, 3.0).unwrap();
            best = best.min(geometry::distance(cand, user));
        }
        place_ok &= chosen <= best + 1e-9;
    }

    report(
        "criterion 5",
        norm_ok && shadow_ok && af_ok && place_ok,
        &format!(
            "fading E|h|^2 {norm_detail} (within 0.5%); shadowing variance {var_db:.4} dB^2 \
             (11 +- 0.1); AF <= min over 1e5 pairs [{af_ok}]; placement <= 1 mm grid + 1e-9 \
             on 1000 users [{place_ok}]"
        ),
    );
}

#[test]
fn criterion_6_cli_determinism_and_runtime() {
    let bin = env!("CARGO_BIN_EXE_wipass-sim");
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("threads1");
    let out_b = dir.path().join("threads8");

    let run = |out: &std::path::Path, threads: &str| {
        let start = Instant::now();
        let status = std::process::Command::new(bin)
            .args([
                "power-sweep",
                "--seed",
                "24301",
                "--trials",
                "10000",
                "--threads",
                threads,
                "--out-dir",
                out.to_str().unwrap(),
            ])
            .stdout(std::process::Stdio::null())
            .status()
            .unwrap();
        assert!(status.success());
        start.elapsed().as_secs_f64()
    };
    let t1 = run(&out_a, "1");
    let t8 = run(&out_b, "8");

    let csv_a = std::fs::read(out_a.join("power_sweep.csv")).unwrap();
    let csv_b = std::fs::read(out_b.join("power_sweep.csv")).unwrap();
    let mut ok = csv_a == csv_b;
    for scheme in Scheme::ALL {
        let series_a = std::fs::read(out_a.join(format!("power_sweep_{}.dat", scheme.name()))).unwrap();
        let series_b = std::fs::read(out_b.join(format!("power_sweep_{}.dat", scheme.name()))).unwrap();
        ok &= series_a == series_b;
    }
    ok &= !csv_a.is_empty();
    ok &= t1 < 60.0 && t8 < 60.0;

    report(
        "criterion 6",
        ok,
        &format!(
            "CSV and series bytes identical across 1 and 8 threads; full power sweep \
             {t1:.2} s single-threaded, {t8:.2} s with 8 threads (< 60 s)"
        ),
    );
}
