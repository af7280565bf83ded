//! Scenario parameters shared by the simulator and the analytic calculator.
//!
//! The noise power is normalised to one throughout the crate, so `snr_tx`
//! doubles as the transmit power `P_t` and every derived SNR is linear.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Largest number of selected subcarriers for which activation patterns are
/// enumerated (`2^16` patterns).
pub const MAX_SELECTED: usize = 16;

/// One scenario: subcarrier counts, PSK order, per-hop mean gains, transmit
/// SNR and the outage threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Total subcarriers `N_T`, a power of two.
    pub n_total: usize,
    /// Subcarriers selected for index modulation, `1 <= N_S < N_T`.
    pub n_selected: usize,
    /// PSK order `M`, a power of two `>= 2`.
    pub apm_order: usize,
    pub mean_gain_hop1: f64,
    pub mean_gain_hop2: f64,
    /// Linear `P_t / N_0`.
    pub snr_tx: f64,
    /// Linear SNR outage threshold `s`.
    pub outage_threshold: f64,
}

impl SystemConfig {
    pub fn new(
        n_total: usize,
        n_selected: usize,
        apm_order: usize,
        mean_gain_hop1: f64,
        mean_gain_hop2: f64,
        snr_tx: f64,
        outage_threshold: f64,
    ) -> Result<Self> {
        let config = Self {
            n_total,
            n_selected,
            apm_order,
            mean_gain_hop1,
            mean_gain_hop2,
            snr_tx,
            outage_threshold,
        };
        config.validate()?;
        Ok(config)
    }

    /// Unit mean gains, unit threshold and 0 dB transmit SNR.
    pub fn normalized(n_total: usize, n_selected: usize, apm_order: usize) -> Result<Self> {
        Self::new(n_total, n_selected, apm_order, 1.0, 1.0, 1.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_total < 2 || !self.n_total.is_power_of_two() {
            return Err(invalid(format!(
                "n_total must be a power of two >= 2, got {}",
                self.n_total
            )));
        }
        if self.n_selected < 1 || self.n_selected >= self.n_total {
            return Err(invalid(format!(
                "n_selected must satisfy 1 <= n_selected < n_total, got {} with n_total {}",
                self.n_selected, self.n_total
            )));
        }
        if self.n_selected > MAX_SELECTED {
            return Err(invalid(format!(
                "n_selected must not exceed {MAX_SELECTED}, got {}",
                self.n_selected
            )));
        }
        if self.apm_order < 2 || !self.apm_order.is_power_of_two() {
            return Err(invalid(format!(
                "apm_order must be a power of two >= 2, got {}",
                self.apm_order
            )));
        }
        for (name, value) in [
            ("mean_gain_hop1", self.mean_gain_hop1),
            ("mean_gain_hop2", self.mean_gain_hop2),
            ("snr_tx", self.snr_tx),
            ("outage_threshold", self.outage_threshold),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(invalid(format!("{name} must be finite and > 0, got {value}")));
            }
        }
        Ok(())
    }

    pub fn with_snr(mut self, snr_tx: f64) -> Self {
        self.snr_tx = snr_tx;
        self
    }

    pub fn with_snr_db(self, snr_db: f64) -> Self {
        self.with_snr(db_to_linear(snr_db))
    }

    pub fn with_selected(mut self, n_selected: usize) -> Self {
        self.n_selected = n_selected;
        self
    }

    pub fn mean_gain(&self, hop: Hop) -> f64 {
        match hop {
            Hop::First => self.mean_gain_hop1,
            Hop::Second => self.mean_gain_hop2,
        }
    }

    /// Mean of the end-to-end link gain `min(|h_1|^2, |h_2|^2)`.
    pub fn link_mean_gain(&self) -> f64 {
        self.mean_gain_hop1 * self.mean_gain_hop2 / (self.mean_gain_hop1 + self.mean_gain_hop2)
    }

    /// Bits per PSK symbol, `log2(M)`.
    pub fn bits_per_symbol(&self) -> usize {
        self.apm_order.trailing_zeros() as usize
    }

    pub fn pattern_count(&self) -> usize {
        1 << self.n_selected
    }

    /// Scenario actually simulated for `methodology`: the fixed-scheme
    /// baseline always uses `N_S = N_T / 2`, everything else is unchanged.
    pub fn for_methodology(&self, methodology: Methodology) -> Self {
        match methodology {
            Methodology::NoAdaptation => self.with_selected(self.n_total / 2),
            _ => *self,
        }
    }

    /// `N_T - N_S`, the order of the complementary subcarrier and the
    /// diversity order of the adaptive schemes.
    pub fn diversity_order(&self) -> usize {
        self.n_total - self.n_selected
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Source-to-relay (`First`) or relay-to-destination (`Second`) hop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hop {
    First,
    Second,
}

impl Hop {
    pub const BOTH: [Hop; 2] = [Hop::First, Hop::Second];
}

/// How the subcarrier mapping scheme is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Methodology {
    /// Source and relay each select from their own hop's CSI.
    Decentralized,
    /// The source selects on the per-subcarrier minimum of both hops and the
    /// relay reuses that scheme.
    Centralized,
    /// Fixed scheme `{1..N_S}` with no adaptation.
    NoAdaptation,
    /// Frequency-domain PSK: one of `N_T` subcarriers active per use.
    Fpsk,
}

impl Methodology {
    pub const ALL: [Methodology; 4] = [
        Methodology::Decentralized,
        Methodology::Centralized,
        Methodology::NoAdaptation,
        Methodology::Fpsk,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Methodology::Decentralized => "decentralized",
            Methodology::Centralized => "centralized",
            Methodology::NoAdaptation => "none",
            Methodology::Fpsk => "fpsk",
        }
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self, Methodology::Decentralized | Methodology::Centralized)
    }
}

impl fmt::Display for Methodology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Methodology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Methodology::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| {
                invalid(format!(
                    "unknown methodology {s:?}; expected one of decentralized, centralized, none, fpsk"
                ))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_broken_invariants() {
        assert!(SystemConfig::normalized(6, 2, 2).is_err());
        assert!(SystemConfig::normalized(4, 4, 2).is_err());
        assert!(SystemConfig::normalized(4, 0, 2).is_err());
        assert!(SystemConfig::normalized(4, 2, 3).is_err());
        assert!(SystemConfig::normalized(4, 2, 1).is_err());
        assert!(SystemConfig::new(4, 2, 2, 1.0, -1.0, 1.0, 1.0).is_err());
        assert!(SystemConfig::new(4, 2, 2, 1.0, 1.0, f64::NAN, 1.0).is_err());
        assert!(SystemConfig::normalized(1 << 6, 17, 2).is_err());
        assert!(SystemConfig::normalized(8, 4, 4).is_ok());
    }

    #[test]
    fn derived_quantities() {
        let c = SystemConfig::new(8, 3, 4, 1.0, 3.0, 1.0, 1.0).unwrap();
        assert_eq!(c.bits_per_symbol(), 2);
        assert_eq!(c.pattern_count(), 8);
        assert_eq!(c.diversity_order(), 5);
        assert!((c.link_mean_gain() - 0.75).abs() < 1e-15);
        assert!((c.with_snr_db(30.0).snr_tx - 1000.0).abs() < 1e-9);
        assert!((linear_to_db(db_to_linear(17.5)) - 17.5).abs() < 1e-12);
    }

    #[test]
    fn methodology_names_round_trip() {
        for m in Methodology::ALL {
            assert_eq!(m.name().parse::<Methodology>().unwrap(), m);
        }
        assert!("adaptive".parse::<Methodology>().is_err());
    }
}
