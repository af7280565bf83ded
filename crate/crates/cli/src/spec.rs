//! Experiment description: a flat `key = value` file, one key per line.
//!
//! ```text
//! # two-hop outage sweep
//! n_total = 4
//! n_selected = 2
//! apm_order = 2
//! mean_gain_hop1 = 1
//! mean_gain_hop2 = 1
//! outage_threshold = 1
//! metric = outage
//! methodologies = decentralized, centralized
//! snr_db = 0:30:5
//! trials = 1000000
//! seed = 1
//! output = outage.csv
//! ```
//!
//! `n_total`, `n_selected`, `metric` and `output` are required. `snr_db`
//! is required for the Monte Carlo metrics. Blank lines and lines starting
//! with `#` are ignored.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use imrelay::montecarlo::Metric;
use imrelay::{Methodology, SystemConfig};

use crate::CliError;

/// Smallest trial count accepted for a Monte Carlo metric.
pub const MIN_TRIALS: u64 = 1_000;

/// What an experiment produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Outage,
    Capacity,
    Ser,
    /// Closed-form rate table; no simulation.
    Rates,
}

impl MetricKind {
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Outage => "outage",
            MetricKind::Capacity => "capacity",
            MetricKind::Ser => "ser",
            MetricKind::Rates => "rates",
        }
    }

    /// The simulated metric, `None` for [`MetricKind::Rates`].
    pub fn simulated(&self) -> Option<Metric> {
        match self {
            MetricKind::Outage => Some(Metric::Outage),
            MetricKind::Capacity => Some(Metric::Capacity),
            MetricKind::Ser => Some(Metric::Ser),
            MetricKind::Rates => None,
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "outage" => Ok(MetricKind::Outage),
            "capacity" => Ok(MetricKind::Capacity),
            "ser" => Ok(MetricKind::Ser),
            "rates" => Ok(MetricKind::Rates),
            other => Err(CliError::Spec(format!(
                "unknown metric {other:?}; expected outage, capacity, ser or rates"
            ))),
        }
    }
}

/// Inclusive dB grid `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SnrGrid {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.step.is_finite()) {
            return Err(CliError::Spec("snr_db bounds must be finite".into()));
        }
        if self.start > self.stop {
            return Err(CliError::Spec(format!(
                "snr_db requires start <= stop, got {}:{}",
                self.start, self.stop
            )));
        }
        if self.step <= 0.0 {
            return Err(CliError::Spec(format!("snr_db requires step > 0, got {}", self.step)));
        }
        Ok(())
    }

    /// Grid points; each is rounded to 1e-9 dB so that `0:1:0.1` gives `0.3`
    /// rather than `0.30000000000000004`.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| ((self.start + i as f64 * self.step) * 1e9).round() / 1e9)
            .collect()
    }
}

impl fmt::Display for SnrGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{:?}:{:?}", self.start, self.stop, self.step)
    }
}

impl FromStr for SnrGrid {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(CliError::Spec(format!("snr_db must be start:stop:step, got {s:?}")));
        };
        let num = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Spec(format!("snr_db: {v:?} is not a number")))
        };
        Ok(SnrGrid { start: num(start)?, stop: num(stop)?, step: num(step)? })
    }
}

/// A parsed and validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Scenario; `snr_tx` is set per grid point.
    pub config: SystemConfig,
    pub metric: MetricKind,
    pub methodologies: Vec<Methodology>,
    pub snr_db: Option<SnrGrid>,
    pub trials: u64,
    pub seed: u64,
    pub output_path: PathBuf,
}

/// Command-line values that replace the file's.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub metric: Option<MetricKind>,
    pub methodologies: Vec<Methodology>,
    pub snr_db: Option<SnrGrid>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub output_path: Option<PathBuf>,
}

const KEYS: [&str; 12] = [
    "n_total",
    "n_selected",
    "apm_order",
    "mean_gain_hop1",
    "mean_gain_hop2",
    "outage_threshold",
    "metric",
    "methodologies",
    "snr_db",
    "trials",
    "seed",
    "output",
];

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Spec(format!("{key}: cannot parse {value:?}")))
}

fn parse_methodologies(value: &str) -> Result<Vec<Methodology>, CliError> {
    value
        .split(',')
        .map(|m| m.parse::<Methodology>().map_err(|e| CliError::Spec(e.to_string())))
        .collect()
}

impl ExperimentSpec {
    /// Parses the file text and applies `overrides` before validating.
    pub fn parse_with(text: &str, overrides: &Overrides) -> Result<Self, CliError> {
        let mut values: Vec<(&str, &str)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            // `#` starts a comment anywhere on the line
            let line = raw.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Spec(format!("line {}: expected `key = value`, got {line:?}", i + 1)));
            };
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(CliError::Spec(format!("line {}: unknown key {key:?}", i + 1)));
            }
            if values.iter().any(|(k, _)| *k == key) {
                return Err(CliError::Spec(format!("line {}: duplicate key {key:?}", i + 1)));
            }
            values.push((key, value));
        }
        let get = |key: &str| values.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let required = |key: &str| get(key).ok_or_else(|| CliError::Spec(format!("missing required key {key:?}")));
        let or_default = |key: &str, default: f64| -> Result<f64, CliError> {
            get(key).map_or(Ok(default), |v| parse_value(key, v))
        };

        let n_total = parse_value("n_total", required("n_total")?)?;
        let n_selected = parse_value("n_selected", required("n_selected")?)?;
        let apm_order = get("apm_order").map_or(Ok(2), |v| parse_value("apm_order", v))?;
        let config = SystemConfig::new(
            n_total,
            n_selected,
            apm_order,
            or_default("mean_gain_hop1", 1.0)?,
            or_default("mean_gain_hop2", 1.0)?,
            1.0,
            or_default("outage_threshold", 1.0)?,
        )
        .map_err(|e| CliError::Spec(e.to_string()))?;

        let metric = match overrides.metric {
            Some(m) => m,
            None => required("metric")?.parse()?,
        };
        let methodologies = if !overrides.methodologies.is_empty() {
            overrides.methodologies.clone()
        } else {
            get("methodologies").map_or(Ok(vec![Methodology::Decentralized, Methodology::Centralized]), parse_methodologies)?
        };
        let snr_db = match overrides.snr_db {
            Some(g) => Some(g),
            None => get("snr_db").map(str::parse).transpose()?,
        };
        let trials = match overrides.trials {
            Some(t) => t,
            None => get("trials").map_or(Ok(100_000), |v| parse_value("trials", v))?,
        };
        let seed = match overrides.seed {
            Some(s) => s,
            None => get("seed").map_or(Ok(1), |v| parse_value("seed", v))?,
        };
        let output_path = match &overrides.output_path {
            Some(p) => p.clone(),
            None => PathBuf::from(required("output")?),
        };

        let spec = Self { config, metric, methodologies, snr_db, trials, seed, output_path };
        spec.validate()?;
        Ok(spec)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        Self::parse_with(text, &Overrides::default())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.config.validate().map_err(|e| CliError::Spec(e.to_string()))?;
        if self.methodologies.is_empty() {
            return Err(CliError::Spec("methodologies must not be empty".into()));
        }
        if self.output_path.as_os_str().is_empty() {
            return Err(CliError::Spec("output path must not be empty".into()));
        }
        if self.metric.simulated().is_some() {
            let grid = self
                .snr_db
                .ok_or_else(|| CliError::Spec(format!("metric {} needs snr_db = start:stop:step", self.metric)))?;
            grid.validate()?;
            if self.trials < MIN_TRIALS {
                return Err(CliError::Spec(format!(
                    "trials must be >= {MIN_TRIALS} for Monte Carlo metrics, got {}",
                    self.trials
                )));
            }
        } else if let Some(grid) = self.snr_db {
            grid.validate()?;
        }
        Ok(())
    }

    /// The experiment in file form; [`ExperimentSpec::parse`] maps it back to
    /// `self`.
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let methodologies: Vec<&str> = self.methodologies.iter().map(|m| m.name()).collect();
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        line("n_total", c.n_total.to_string());
        line("n_selected", c.n_selected.to_string());
        line("apm_order", c.apm_order.to_string());
        line("mean_gain_hop1", format!("{:?}", c.mean_gain_hop1));
        line("mean_gain_hop2", format!("{:?}", c.mean_gain_hop2));
        line("outage_threshold", format!("{:?}", c.outage_threshold));
        line("metric", self.metric.to_string());
        line("methodologies", methodologies.join(", "));
        if let Some(grid) = self.snr_db {
            line("snr_db", grid.to_string());
        }
        line("trials", self.trials.to_string());
        line("seed", self.seed.to_string());
        line("output", self.output_path.display().to_string());
        out
    }
}
