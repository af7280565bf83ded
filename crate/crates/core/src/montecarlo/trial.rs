//! Per-trial kernels.
//!
//! A [`TrialWorkspace`] owns every buffer a trial needs, so the engines run
//! without allocating. Each kernel draws the channels first, then the
//! pattern (or payload), then the noise.

use num_complex::Complex64;
use rand::Rng;

use crate::block::SymbolSpace;
use crate::channel::{complex_gaussian, ChannelRealization};
use crate::config::{Hop, Methodology, SystemConfig};
use crate::error::Result;
use crate::mapping::{default_scheme, MappingScheme, SchemeSelector, SelectionResult};
use crate::modem::{transmit_into, Detector};
use crate::pattern::ActivationPattern;
use crate::specialfn::HALF_INV_LN2;

/// Everything observed in one protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    /// Drawn pattern; `None` for FPSK.
    pub pattern: Option<ActivationPattern>,
    /// Mapping schemes; `None` for FPSK.
    pub schemes: Option<SelectionResult>,
    /// Absolute subcarriers carrying signal on each hop.
    pub active_subcarriers: [Vec<usize>; 2],
    /// Definition-style outage flag per hop.
    pub outage: [bool; 2],
    /// Whether the relay and the destination decided wrongly (the
    /// destination compares against the relay's forwarded block).
    pub detection_error: [bool; 2],
    /// Destination block differs from the source block.
    pub end_to_end_error: bool,
    /// Max-flow min-cut capacity of this use, bit/s/Hz.
    pub capacity: f64,
}

/// Reusable state for one methodology and scenario.
#[derive(Debug, Clone)]
pub struct TrialWorkspace {
    config: SystemConfig,
    methodology: Methodology,
    g1: Vec<f64>,
    g2: Vec<f64>,
    link: Vec<f64>,
    realization: ChannelRealization,
    selector: SchemeSelector,
    scheme1: MappingScheme,
    scheme2: MappingScheme,
    space: Option<SymbolSpace>,
    detector: Detector,
    received: Vec<Complex64>,
}

impl TrialWorkspace {
    /// `config` is the scenario as requested; the fixed-scheme baseline
    /// replaces `N_S` by `N_T / 2`.
    pub fn new(config: &SystemConfig, methodology: Methodology) -> Result<Self> {
        config.validate()?;
        let config = config.for_methodology(methodology);
        let fixed = default_scheme(&config).scheme_hop1;
        Ok(Self {
            config,
            methodology,
            g1: vec![0.0; config.n_total],
            g2: vec![0.0; config.n_total],
            link: vec![0.0; config.n_total],
            realization: ChannelRealization::zeros(config.n_total),
            selector: SchemeSelector::default(),
            scheme1: fixed.clone(),
            scheme2: fixed,
            space: None,
            detector: Detector::new(&config),
            received: Vec::with_capacity(config.n_total),
        })
    }

    /// The scenario actually simulated.
    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn methodology(&self) -> Methodology {
        self.methodology
    }

    fn space(&mut self) -> Result<&SymbolSpace> {
        if self.space.is_none() {
            self.space = Some(SymbolSpace::new(self.config.n_selected, self.config.apm_order)?);
        }
        Ok(self.space.as_ref().expect("just built"))
    }

    fn draw_channels<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        self.realization.resample(rng, &self.config);
        for (g, h) in self.g1.iter_mut().zip(&self.realization.hop1) {
            *g = h.norm_sqr();
        }
        for (g, h) in self.g2.iter_mut().zip(&self.realization.hop2) {
            *g = h.norm_sqr();
        }
    }

    fn select(&mut self) {
        let n_s = self.config.n_selected;
        match self.methodology {
            Methodology::Decentralized => {
                self.selector.select_into(&self.g1, n_s, &mut self.scheme1);
                self.selector.select_into(&self.g2, n_s, &mut self.scheme2);
            }
            Methodology::Centralized => {
                for ((l, a), b) in self.link.iter_mut().zip(&self.g1).zip(&self.g2) {
                    *l = a.min(*b);
                }
                self.selector.select_into(&self.link, n_s, &mut self.scheme1);
                self.scheme2.clone_from(&self.scheme1);
            }
            Methodology::NoAdaptation | Methodology::Fpsk => {}
        }
    }

    fn draw_mask<R: Rng + ?Sized>(&self, rng: &mut R, stratum: Option<u64>) -> u32 {
        let patterns = self.config.pattern_count() as u64;
        match stratum {
            Some(t) => (t % patterns) as u32,
            None => rng.random_range(0..patterns) as u32,
        }
    }

    /// SNR of the weakest signal-carrying subcarrier on each hop.
    fn hop_snr_below(&self, gains: &[f64], scheme: &MappingScheme, mask: u32, s: f64) -> bool {
        let p = self.config.snr_tx;
        if mask == 0 {
            return p * gains[scheme.complementary()] < s;
        }
        let n_a = mask.count_ones() as f64;
        (0..self.config.n_selected)
            .filter(|slot| (mask >> slot) & 1 == 1)
            .any(|slot| p * gains[scheme.absolute_index(slot)] / n_a < s)
    }

    /// One outage trial: `true` if either hop is in outage.
    pub fn outage_trial<R: Rng + ?Sized>(&mut self, rng: &mut R, stratum: Option<u64>) -> bool {
        self.draw_channels(rng);
        let s = self.config.outage_threshold;
        let p = self.config.snr_tx;
        if self.methodology == Methodology::Fpsk {
            let n = self.fpsk_index(rng, stratum);
            return p * self.g1[n] < s || p * self.g2[n] < s;
        }
        self.select();
        let mask = self.draw_mask(rng, stratum);
        // early exit on the first hop
        self.hop_snr_below(&self.g1, &self.scheme1, mask, s) || self.hop_snr_below(&self.g2, &self.scheme2, mask, s)
    }

    fn capacity_for(&self, mask: u32) -> f64 {
        let p = self.config.snr_tx;
        let half_log = |snr: f64| HALF_INV_LN2 * snr.ln_1p();
        if mask == 0 {
            let a = self.g1[self.scheme1.complementary()];
            let b = self.g2[self.scheme2.complementary()];
            return half_log(p * a.min(b));
        }
        let n_a = mask.count_ones() as f64;
        (0..self.config.n_selected)
            .filter(|slot| (mask >> slot) & 1 == 1)
            .map(|slot| {
                let a = self.g1[self.scheme1.absolute_index(slot)];
                let b = self.g2[self.scheme2.absolute_index(slot)];
                half_log(p * a.min(b) / n_a)
            })
            .sum()
    }

    /// One capacity trial: `Σ_n (1/2) log2(1 + min(γ_1(n), γ_2(n)))`.
    pub fn capacity_trial<R: Rng + ?Sized>(&mut self, rng: &mut R, stratum: Option<u64>) -> f64 {
        self.draw_channels(rng);
        if self.methodology == Methodology::Fpsk {
            let n = self.fpsk_index(rng, stratum);
            return HALF_INV_LN2 * (self.config.snr_tx * self.g1[n].min(self.g2[n])).ln_1p();
        }
        self.select();
        let mask = self.draw_mask(rng, stratum);
        self.capacity_for(mask)
    }

    fn fpsk_index<R: Rng + ?Sized>(&self, rng: &mut R, stratum: Option<u64>) -> usize {
        match stratum {
            Some(t) => (t % self.config.n_total as u64) as usize,
            None => rng.random_range(0..self.config.n_total),
        }
    }

    fn draw_block<R: Rng + ?Sized>(&mut self, rng: &mut R, stratum: Option<u64>) -> Result<usize> {
        let mask = self.draw_mask(rng, stratum);
        let ids = self.space()?.pattern_ids(mask);
        Ok(rng.random_range(ids))
    }

    /// Sends block `sent` over hop `hop` and returns the ML decision.
    fn hop_decide<R: Rng + ?Sized>(&mut self, sent: usize, hop: Hop, rng: &mut R) -> usize {
        let space = self.space.as_ref().expect("space built by draw_block");
        let (channel, scheme) = match hop {
            Hop::First => (&self.realization.hop1, &self.scheme1),
            Hop::Second => (&self.realization.hop2, &self.scheme2),
        };
        transmit_into(space.get(sent), channel, scheme, self.config.snr_tx, 1.0, rng, &mut self.received);
        self.detector.detect(&self.received, channel, scheme, self.config.snr_tx, space)
    }

    /// One decode-and-forward block transmission: `true` if the destination's
    /// block differs from the source's.
    pub fn ser_trial<R: Rng + ?Sized>(&mut self, rng: &mut R, stratum: Option<u64>) -> Result<bool> {
        self.draw_channels(rng);
        if self.methodology == Methodology::Fpsk {
            let (source, _, destination) = self.fpsk_ser_trial(rng, stratum);
            return Ok(source != destination);
        }
        self.select();
        let sent = self.draw_block(rng, stratum)?;
        let at_relay = self.hop_decide(sent, Hop::First, rng);
        let at_destination = self.hop_decide(at_relay, Hop::Second, rng);
        Ok(at_destination != sent)
    }

    /// FPSK hop: one full-power symbol on subcarrier `n`, noise on all `N_T`.
    fn fpsk_hop<R: Rng + ?Sized>(&self, channel: &[Complex64], n: usize, m: usize, rng: &mut R) -> (usize, usize) {
        let root_p = self.config.snr_tx.sqrt();
        let order = self.config.apm_order;
        let mut best = (f64::NEG_INFINITY, 0, 0);
        for (j, h) in channel.iter().enumerate() {
            let mut y = complex_gaussian(rng, 1.0);
            if j == n {
                y += root_p * h * crate::block::psk_symbol(m, order);
            }
            // metric |y|^2 - |y - sqrt(P) h x|^2, larger is better
            let energy = y.norm_sqr();
            for c in 0..order {
                let metric = energy - (y - root_p * h * crate::block::psk_symbol(c, order)).norm_sqr();
                if metric > best.0 {
                    best = (metric, j, c);
                }
            }
        }
        (best.1, best.2)
    }

    /// `(subcarrier, symbol)` sent by the source, decided by the relay and
    /// decided by the destination.
    #[allow(clippy::type_complexity)]
    fn fpsk_ser_trial<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        stratum: Option<u64>,
    ) -> ((usize, usize), (usize, usize), (usize, usize)) {
        let n = self.fpsk_index(rng, stratum);
        let m = rng.random_range(0..self.config.apm_order);
        let relay = self.fpsk_hop(&self.realization.hop1, n, m, rng);
        let destination = self.fpsk_hop(&self.realization.hop2, relay.0, relay.1, rng);
        ((n, m), relay, destination)
    }

    /// Runs the complete protocol once and records every observable.
    pub fn record_trial<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<TrialRecord> {
        self.draw_channels(rng);
        let s = self.config.outage_threshold;
        let p = self.config.snr_tx;
        if self.methodology == Methodology::Fpsk {
            let (source, relay, destination) = self.fpsk_ser_trial(rng, None);
            let n = source.0;
            return Ok(TrialRecord {
                pattern: None,
                schemes: None,
                active_subcarriers: [vec![n], vec![relay.0]],
                outage: [p * self.g1[n] < s, p * self.g2[n] < s],
                detection_error: [relay != source, destination != relay],
                end_to_end_error: destination != source,
                capacity: HALF_INV_LN2 * (p * self.g1[n].min(self.g2[n])).ln_1p(),
            });
        }
        self.select();
        let sent = self.draw_block(rng, None)?;
        let space = self.space.as_ref().expect("space built");
        let pattern = space.get(sent).pattern();
        let mask = pattern.mask();
        let active = |scheme: &MappingScheme| -> Vec<usize> {
            if mask == 0 {
                vec![scheme.complementary()]
            } else {
                pattern.active_slots().map(|slot| scheme.absolute_index(slot)).collect()
            }
        };
        let active_subcarriers = [active(&self.scheme1), active(&self.scheme2)];
        let outage = [
            self.hop_snr_below(&self.g1, &self.scheme1, mask, s),
            self.hop_snr_below(&self.g2, &self.scheme2, mask, s),
        ];
        let capacity = self.capacity_for(mask);
        let at_relay = self.hop_decide(sent, Hop::First, rng);
        let at_destination = self.hop_decide(at_relay, Hop::Second, rng);
        Ok(TrialRecord {
            pattern: Some(pattern),
            schemes: Some(SelectionResult {
                scheme_hop1: self.scheme1.clone(),
                scheme_hop2: self.scheme2.clone(),
                methodology: self.methodology,
            }),
            active_subcarriers,
            outage,
            detection_error: [at_relay != sent, at_destination != at_relay],
            end_to_end_error: at_destination != sent,
            capacity,
        })
    }
}

/// One full protocol run with a fresh workspace.
pub fn simulate_trial<R: Rng + ?Sized>(
    config: &SystemConfig,
    methodology: Methodology,
    rng: &mut R,
) -> Result<TrialRecord> {
    TrialWorkspace::new(config, methodology)?.record_trial(rng)
}
