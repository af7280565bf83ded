//! Monte Carlo estimation of outage, capacity and end-to-end block error
//! rate by simulating the full two-hop protocol.
//!
//! Trials are split into fixed-size batches. Batch `b` always draws from
//! `RngStream(seed, b)` and batch tallies are merged in batch order, so an
//! estimate depends only on `(config, methodology, trials, seed, options)`
//! and never on how many worker threads ran it.

mod sweep;
mod trial;

use rayon::prelude::*;

use crate::channel::RngStream;
use crate::config::{Methodology, SystemConfig};
use crate::error::{invalid, Error, Result};

pub use sweep::{derive_seed, sweep, sweep_with_progress, SweepRow};
pub use trial::{simulate_trial, TrialRecord, TrialWorkspace};

/// Quantity estimated by a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Outage,
    Capacity,
    Ser,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Outage => "outage",
            Metric::Capacity => "capacity",
            Metric::Ser => "ser",
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A Monte Carlo point estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricEstimate {
    pub mean: f64,
    /// `sqrt(population variance / trials)`; equals `sqrt(p (1 - p) / n)`
    /// for the Bernoulli metrics.
    pub std_error: f64,
    pub trials: u64,
    /// Event count for outage and SER.
    pub events: Option<u64>,
    pub metric: Metric,
    pub config: SystemConfig,
    pub methodology: Methodology,
}

/// Engine knobs that do not change what is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub batch_size: u64,
    /// Cycle `k` (or the FPSK index) deterministically through all values
    /// instead of drawing it.
    pub stratified: bool,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub workers: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { batch_size: 10_000, stratified: false, workers: None }
    }
}

/// Count, mean and centred second moment of a batch (Chan et al. merge).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Tally {
    n: u64,
    mean: f64,
    m2: f64,
    events: u64,
}

impl Tally {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn push_event(&mut self, hit: bool) {
        self.events += hit as u64;
        self.push(if hit { 1.0 } else { 0.0 });
    }

    fn merge(&mut self, other: &Tally) {
        if other.n == 0 {
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        self.mean += delta * other.n as f64 / n as f64;
        self.m2 += other.m2 + delta * delta * (self.n as f64 * other.n as f64 / n as f64);
        self.n = n;
        self.events += other.events;
    }
}

fn run_batch(
    workspace: &mut TrialWorkspace,
    metric: Metric,
    seed: u64,
    batch: u64,
    len: u64,
    options: &RunOptions,
) -> Result<Tally> {
    let mut rng = RngStream::new(seed, batch);
    let mut tally = Tally::default();
    for i in 0..len {
        let stratum = options.stratified.then(|| batch * options.batch_size + i);
        match metric {
            Metric::Outage => tally.push_event(workspace.outage_trial(&mut rng, stratum)),
            Metric::Capacity => tally.push(workspace.capacity_trial(&mut rng, stratum)),
            Metric::Ser => tally.push_event(workspace.ser_trial(&mut rng, stratum)?),
        }
    }
    Ok(tally)
}

/// Tallies of batches `first..first + count`, in batch order.
fn run_batches(
    config: &SystemConfig,
    methodology: Methodology,
    metric: Metric,
    seed: u64,
    trials: u64,
    first: u64,
    count: u64,
    options: &RunOptions,
) -> Result<Vec<Tally>> {
    let prototype = TrialWorkspace::new(config, methodology)?;
    let work = || {
        (first..first + count)
            .into_par_iter()
            .map_init(
                || prototype.clone(),
                |ws, b| {
                    let start = b * options.batch_size;
                    let len = options.batch_size.min(trials - start);
                    run_batch(ws, metric, seed, b, len, options)
                },
            )
            .collect::<Result<Vec<_>>>()
    };
    match options.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start {n} workers: {e}")))?
            .install(work),
        None => work(),
    }
}

fn check_run(trials: u64, options: &RunOptions) -> Result<()> {
    if trials == 0 {
        return Err(invalid("trials must be >= 1"));
    }
    if options.batch_size == 0 {
        return Err(invalid("batch_size must be >= 1"));
    }
    if options.workers == Some(0) {
        return Err(invalid("workers must be >= 1"));
    }
    Ok(())
}

fn finish(tally: &Tally, metric: Metric, config: &SystemConfig, methodology: Methodology) -> MetricEstimate {
    let n = tally.n as f64;
    let bernoulli = matches!(metric, Metric::Outage | Metric::Ser);
    let (mean, variance) = if bernoulli {
        let p = tally.events as f64 / n;
        (p, p * (1.0 - p))
    } else {
        (tally.mean, (tally.m2 / n).max(0.0))
    };
    MetricEstimate {
        mean,
        std_error: (variance / n).sqrt(),
        trials: tally.n,
        events: bernoulli.then_some(tally.events),
        metric,
        config: *config,
        methodology,
    }
}

/// Estimates `metric` with `trials` trials.
pub fn run_metric(
    metric: Metric,
    config: &SystemConfig,
    methodology: Methodology,
    trials: u64,
    seed: u64,
    options: &RunOptions,
) -> Result<MetricEstimate> {
    check_run(trials, options)?;
    let batches = trials.div_ceil(options.batch_size);
    let tallies = run_batches(config, methodology, metric, seed, trials, 0, batches, options)?;
    let mut total = Tally::default();
    for t in &tallies {
        total.merge(t);
    }
    Ok(finish(&total, metric, config, methodology))
}

/// Outage fraction: either hop has an active subcarrier with SNR below
/// `config.outage_threshold`.
pub fn run_outage(config: &SystemConfig, methodology: Methodology, trials: u64, seed: u64) -> Result<MetricEstimate> {
    run_metric(Metric::Outage, config, methodology, trials, seed, &RunOptions::default())
}

/// Mean max-flow min-cut capacity.
pub fn run_capacity(config: &SystemConfig, methodology: Methodology, trials: u64, seed: u64) -> Result<MetricEstimate> {
    run_metric(Metric::Capacity, config, methodology, trials, seed, &RunOptions::default())
}

/// End-to-end block error rate.
pub fn run_ser(config: &SystemConfig, methodology: Methodology, trials: u64, seed: u64) -> Result<MetricEstimate> {
    run_metric(Metric::Ser, config, methodology, trials, seed, &RunOptions::default())
}

/// Batches evaluated between stopping checks in [`run_ser_until`]. Fixed so
/// that the stopping point does not depend on the worker count.
const WAVE_BATCHES: u64 = 16;

/// Block error rate with early stopping: runs until `max_trials` trials or
/// until at least `target_errors` errors, whichever comes first. The run
/// stops at the first batch boundary where the error target is met.
pub fn run_ser_until(
    config: &SystemConfig,
    methodology: Methodology,
    max_trials: u64,
    target_errors: u64,
    seed: u64,
    options: &RunOptions,
) -> Result<MetricEstimate> {
    check_run(max_trials, options)?;
    let batches = max_trials.div_ceil(options.batch_size);
    let mut total = Tally::default();
    let mut next = 0;
    'waves: while next < batches {
        let count = WAVE_BATCHES.min(batches - next);
        let tallies = run_batches(config, methodology, Metric::Ser, seed, max_trials, next, count, options)?;
        for t in &tallies {
            total.merge(t);
            if target_errors > 0 && total.events >= target_errors {
                break 'waves;
            }
        }
        next += count;
    }
    Ok(finish(&total, Metric::Ser, config, methodology))
}
