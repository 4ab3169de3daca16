//! Command-line front end: power sweeps, distance sweeps and single-point
//! runs, emitting CSV plus per-scheme plot series.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wipass_sim::experiment::{self, Config, SweepKind, SweepResult};

#[derive(Parser)]
#[command(name = "wipass-sim", version, about = "Link-level Monte Carlo simulator for wirelessly-fed pinching-antenna systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep BS and relay transmit power over the configured dBm grid.
    PowerSweep(RunArgs),
    /// Sweep the BS-relay distance over the configured meter grid.
    DistanceSweep(RunArgs),
    /// Evaluate the configured powers and distance once.
    Point(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Config file (key = value); omitted keys take canonical defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Master seed override.
    #[arg(long)]
    seed: Option<u64>,

    /// Trials-per-grid-point override.
    #[arg(long)]
    trials: Option<u64>,

    /// Comma-separated scheme subset
    /// (wipass,pass,fd_relay_ideal,fd_relay_practical,direct).
    #[arg(long)]
    schemes: Option<String>,

    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,

    /// Worker thread count; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,

    /// Relay combining rule: af or df.
    #[arg(long)]
    relay_mode: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::PowerSweep(args) => (SweepKind::Power, args),
        Command::DistanceSweep(args) => (SweepKind::Distance, args),
        Command::Point(args) => (SweepKind::Point, args),
    };
    match run(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn run(kind: SweepKind, args: &RunArgs) -> Result<(), Box<dyn std::error::Error>> {
    let mut config = match &args.config {
        Some(path) => experiment::load_config(path)?,
        None => Config::default(),
    };

    let mut overrides: Vec<(&str, String)> = Vec::new();
    if let Some(seed) = args.seed {
        overrides.push(("master_seed", seed.to_string()));
    }
    if let Some(trials) = args.trials {
        overrides.push(("n_trials", trials.to_string()));
    }
    if let Some(schemes) = &args.schemes {
        overrides.push(("schemes", schemes.clone()));
    }
    if let Some(mode) = &args.relay_mode {
        overrides.push(("relay_mode", mode.clone()));
    }
    config.apply_overrides(&overrides)?;

    let result = if args.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build()?;
        pool.install(|| experiment::run_sweep(&config, kind))?
    } else {
        experiment::run_sweep(&config, kind)?
    };

    std::fs::create_dir_all(&args.out_dir)?;
    let csv_path = args.out_dir.join(format!("{}.csv", kind.name()));
    experiment::write_csv(&result, &csv_path)?;
    let series = experiment::emit_plot_data(&result, &args.out_dir, kind.name())?;

    print_summary(&result);
    println!("wrote {}", csv_path.display());
    for path in series {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn print_summary(result: &SweepResult) {
    let unit = match result.kind {
        SweepKind::Power => "dBm",
        SweepKind::Distance => "m",
        SweepKind::Point => "dBm",
    };
    println!(
        "{}: {} rows, {} trials per point, seed {}",
        result.kind.name(),
        result.rows.len(),
        result.config.n_trials,
        result.config.master_seed
    );
    for row in &result.rows {
        println!(
            "  {:>11} {unit}  {:<19} mean {:>12.6} bits/s/Hz  ci95 [{:>12.6}, {:>12.6}]",
            row.sweep_value,
            row.scheme.name(),
            row.stats.mean,
            row.stats.ci95_low,
            row.stats.ci95_high
        );
    }
}
