//! Batch experiment runner: parse an experiment file, run the sweep, write
//! the curve CSV and a manifest next to it.

pub mod spec;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use imrelay::analytics::rate_benchmarks;
use imrelay::modem::average_rate;
use imrelay::montecarlo::{sweep_with_progress, RunOptions, SweepRow};
use thiserror::Error;

pub use spec::{ExperimentSpec, MetricKind, Overrides, SnrGrid};

/// Header of every sweep CSV.
pub const CURVE_HEADER: &str = "snr_db,methodology,metric,mc_mean,mc_stderr,analytic,asymptotic";
/// Header of the `rates` CSV.
pub const RATES_HEADER: &str = "metric,n_total,n_selected,apm_order,average_rate,classic_rate,fpsk_rate";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid experiment: {0}")]
    Spec(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] imrelay::Error),
}

impl CliError {
    /// Process exit status: 2 for a bad experiment, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => 2,
            _ => 1,
        }
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Reads and parses an experiment file.
pub fn load_spec(path: &Path, overrides: &Overrides) -> Result<ExperimentSpec, CliError> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    ExperimentSpec::parse_with(&text, overrides)
}

/// Files written by [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub csv_path: PathBuf,
    pub manifest_path: PathBuf,
    pub data_rows: usize,
}

/// `results.csv` → `results.manifest`.
pub fn manifest_path(output: &Path) -> PathBuf {
    output.with_extension("manifest")
}

fn optional(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

/// One CSV line per sweep row; floats in shortest round-trip form.
pub fn curve_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{:?},{},{},{:?},{:?},{},{}",
            row.snr_db,
            row.methodology,
            row.estimate.metric,
            row.estimate.mean,
            row.estimate.std_error,
            optional(row.analytic.map(|p| p.value)),
            optional(row.asymptotic.map(|p| p.value)),
        );
    }
    out
}

pub fn rates_csv(spec: &ExperimentSpec) -> Result<String, CliError> {
    let c = &spec.config;
    let (classic, fpsk) = rate_benchmarks(c)?;
    Ok(format!(
        "{RATES_HEADER}\nrates,{},{},{},{:?},{:?},{:?}\n",
        c.n_total,
        c.n_selected,
        c.apm_order,
        average_rate(c),
        classic,
        fpsk
    ))
}

/// Spec echo followed by comment lines, so the manifest parses back to the
/// same spec.
pub fn manifest_text(spec: &ExperimentSpec, wall_seconds: f64, options: &RunOptions) -> String {
    let workers = options.workers.map_or_else(|| "default".to_string(), |w| w.to_string());
    format!(
        "{}# tool_version = {} {}\n# wall_time_s = {wall_seconds:.3}\n# workers = {workers}\n",
        spec.to_text(),
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION"),
    )
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_error(dir))?;
    }
    fs::write(path, text).map_err(io_error(path))
}

/// Runs the experiment and writes the CSV and manifest. `progress` gets one
/// line per finished grid point.
pub fn run_experiment(
    spec: &ExperimentSpec,
    options: &RunOptions,
    mut progress: impl FnMut(&str),
) -> Result<RunSummary, CliError> {
    spec.validate()?;
    let started = Instant::now();
    let (csv, data_rows) = match spec.metric.simulated() {
        None => (rates_csv(spec)?, 1),
        Some(metric) => {
            let grid = spec.snr_db.expect("validated").points();
            let rows = sweep_with_progress(
                &spec.config,
                metric,
                &spec.methodologies,
                &grid,
                spec.trials,
                spec.seed,
                options,
                |row| {
                    progress(&format!(
                        "{metric} {} dB {}: {:.4e} ± {:.2e} ({} trials)",
                        row.snr_db, row.methodology, row.estimate.mean, row.estimate.std_error, row.estimate.trials
                    ))
                },
            )?;
            (curve_csv(&rows), rows.len())
        }
    };
    write_file(&spec.output_path, &csv)?;
    let manifest = manifest_path(&spec.output_path);
    write_file(&manifest, &manifest_text(spec, started.elapsed().as_secs_f64(), options))?;
    Ok(RunSummary { csv_path: spec.output_path.clone(), manifest_path: manifest, data_rows })
}
