use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use imrelay::montecarlo::RunOptions;
use imrelay::Methodology;
use imrelay_cli::{load_spec, run_experiment, CliError, MetricKind, Overrides, SnrGrid};

/// Worker-thread count for the Monte Carlo engine.
const WORKERS_ENV: &str = "IMRELAY_WORKERS";

/// Run an index-modulation relay experiment and write its curve CSV.
#[derive(Debug, Parser)]
#[command(name = "imrelay", version)]
struct Args {
    /// Experiment file (`key = value` lines).
    #[arg(long)]
    spec: PathBuf,
    /// outage, capacity, ser or rates.
    #[arg(long)]
    metric: Option<MetricKind>,
    /// decentralized, centralized, none or fpsk; repeat for several.
    #[arg(long = "methodology")]
    methodologies: Vec<Methodology>,
    /// SNR grid in dB, `start:stop:step`.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: Option<SnrGrid>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV path; the manifest goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn workers_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Spec(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

fn run(args: Args) -> Result<(), CliError> {
    let overrides = Overrides {
        metric: args.metric,
        methodologies: args.methodologies,
        snr_db: args.snr_db,
        trials: args.trials,
        seed: args.seed,
        output_path: args.out,
    };
    let spec = load_spec(&args.spec, &overrides)?;
    let options = RunOptions { workers: workers_from_env()?, ..RunOptions::default() };
    let summary = run_experiment(&spec, &options, |line| eprintln!("{line}"))?;
    eprintln!(
        "wrote {} ({} rows) and {}",
        summary.csv_path.display(),
        summary.data_rows,
        summary.manifest_path.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("imrelay: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
