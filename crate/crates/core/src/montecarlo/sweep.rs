//! SNR sweeps pairing each Monte Carlo point with its analytic value.

use crate::analytics::{self, AnalyticCurvePoint, CurveKind};
use crate::config::{Methodology, SystemConfig};
use crate::error::{invalid, Result};

use super::{run_metric, Metric, MetricEstimate, RunOptions};

/// One `(SNR, methodology)` point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub methodology: Methodology,
    pub estimate: MetricEstimate,
    /// `None` where no closed form applies at this size.
    pub analytic: Option<AnalyticCurvePoint>,
    /// High-SNR outage, adaptive schemes only.
    pub asymptotic: Option<AnalyticCurvePoint>,
}

/// Seed for grid point `point` and methodology slot `slot` (SplitMix64).
pub fn derive_seed(seed: u64, point: usize, slot: usize) -> u64 {
    let mut z = seed ^ ((point as u64) << 32 | slot as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn analytic_point(metric: Metric, methodology: Methodology, config: &SystemConfig) -> Option<AnalyticCurvePoint> {
    let (value, kind) = match metric {
        Metric::Outage => (
            analytics::outage_average(methodology, config.outage_threshold, config).ok()?,
            CurveKind::OutageExact,
        ),
        Metric::Capacity => (analytics::capacity_average(methodology, config).ok()?, CurveKind::Capacity),
        Metric::Ser => (analytics::ser_average(methodology, config).ok()?.value, CurveKind::SerApprox),
    };
    Some(AnalyticCurvePoint { snr_tx: config.snr_tx, value, kind })
}

fn asymptotic_point(metric: Metric, methodology: Methodology, config: &SystemConfig) -> Option<AnalyticCurvePoint> {
    if metric != Metric::Outage || !methodology.is_adaptive() {
        return None;
    }
    let value = analytics::outage_asymptotic(methodology, config.outage_threshold, config).ok()?;
    Some(AnalyticCurvePoint { snr_tx: config.snr_tx, value, kind: CurveKind::OutageAsymptotic })
}

/// Runs every `(SNR, methodology)` pair, grid-major.
pub fn sweep(
    config: &SystemConfig,
    metric: Metric,
    methodologies: &[Methodology],
    snr_db_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    sweep_with_progress(config, metric, methodologies, snr_db_grid, trials, seed, &RunOptions::default(), |_| {})
}

/// [`sweep`] with engine options and a callback after each row.
#[allow(clippy::too_many_arguments)]
pub fn sweep_with_progress<F: FnMut(&SweepRow)>(
    config: &SystemConfig,
    metric: Metric,
    methodologies: &[Methodology],
    snr_db_grid: &[f64],
    trials: u64,
    seed: u64,
    options: &RunOptions,
    mut progress: F,
) -> Result<Vec<SweepRow>> {
    if snr_db_grid.is_empty() {
        return Err(invalid("SNR grid is empty"));
    }
    if methodologies.is_empty() {
        return Err(invalid("no methodology given"));
    }
    let mut rows = Vec::with_capacity(snr_db_grid.len() * methodologies.len());
    for (point, &snr_db) in snr_db_grid.iter().enumerate() {
        let at = config.with_snr_db(snr_db);
        for (slot, &methodology) in methodologies.iter().enumerate() {
            let estimate = run_metric(metric, &at, methodology, trials, derive_seed(seed, point, slot), options)?;
            let row = SweepRow {
                snr_db,
                methodology,
                estimate,
                analytic: analytic_point(metric, methodology, &at),
                asymptotic: asymptotic_point(metric, methodology, &at),
            };
            progress(&row);
            rows.push(row);
        }
    }
    Ok(rows)
}
