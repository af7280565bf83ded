//! Dual-mode encoding, per-hop transmission and maximum-likelihood detection.
//!
//! Only the `N_S` selected subcarriers and the complementary subcarrier are
//! modelled. Noise power is `N_0 = 1` unless an explicit variance is given.

use num_complex::Complex64;
use rand::Rng;

use crate::block::{psk_index_for_label, psk_label, psk_symbol, ConcatenatedBlock, SymbolSpace};
use crate::channel::complex_gaussian;
use crate::config::SystemConfig;
use crate::error::{invalid, Result};
use crate::mapping::MappingScheme;
use crate::pattern::ActivationPattern;

/// Index bits followed by one `log2 M`-bit group per carried PSK symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitPayload {
    /// `B_S = N_S` bits; bit `n` switches relative slot `n`.
    pub index_bits: Vec<u8>,
    /// `max{1, N_A}` groups, most significant bit first.
    pub symbol_bits: Vec<Vec<u8>>,
}

impl BitPayload {
    /// Equiprobable payload: uniform index bits, then uniform symbol bits.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, config: &SystemConfig) -> Self {
        let index_bits: Vec<u8> = (0..config.n_selected).map(|_| rng.random_range(0..2u8)).collect();
        let groups = index_bits.iter().filter(|&&b| b == 1).count().max(1);
        let b_m = config.bits_per_symbol();
        let symbol_bits = (0..groups)
            .map(|_| (0..b_m).map(|_| rng.random_range(0..2u8)).collect())
            .collect();
        Self { index_bits, symbol_bits }
    }

    pub fn pattern(&self) -> Result<ActivationPattern> {
        ActivationPattern::from_bits(&self.index_bits)
    }

    /// Payload length `B(k)`.
    pub fn len(&self) -> usize {
        self.index_bits.len() + self.symbol_bits.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Maps a payload to its concatenated block.
pub fn encode(payload: &BitPayload, config: &SystemConfig) -> Result<ConcatenatedBlock> {
    if payload.index_bits.len() != config.n_selected {
        return Err(invalid(format!(
            "expected {} index bits, got {}",
            config.n_selected,
            payload.index_bits.len()
        )));
    }
    let pattern = payload.pattern()?;
    if payload.symbol_bits.len() != pattern.symbol_count() {
        return Err(invalid(format!(
            "pattern k={} carries {} symbol groups, got {}",
            pattern.index(),
            pattern.symbol_count(),
            payload.symbol_bits.len()
        )));
    }
    let b_m = config.bits_per_symbol();
    let mut symbols = Vec::with_capacity(payload.symbol_bits.len());
    for group in &payload.symbol_bits {
        if group.len() != b_m {
            return Err(invalid(format!("symbol group must have {b_m} bits, got {}", group.len())));
        }
        let mut label = 0usize;
        for &b in group {
            if b > 1 {
                return Err(invalid(format!("symbol bit must be 0 or 1, got {b}")));
            }
            label = (label << 1) | b as usize;
        }
        symbols.push(psk_index_for_label(label, config.apm_order));
    }
    ConcatenatedBlock::new(pattern, symbols, config.apm_order)
}

/// Inverse of [`encode`].
pub fn decode(block: &ConcatenatedBlock, config: &SystemConfig) -> BitPayload {
    let b_m = config.bits_per_symbol();
    let symbol_bits = block
        .symbols()
        .iter()
        .map(|&m| {
            let label = psk_label(m, config.apm_order);
            (0..b_m).rev().map(|t| ((label >> t) & 1) as u8).collect()
        })
        .collect();
    BitPayload { index_bits: block.pattern().bits(), symbol_bits }
}

/// Received `N_S + 1` slots of one hop: selected slots, then complementary.
#[derive(Debug, Clone, PartialEq)]
pub struct HopObservation {
    pub received: Vec<Complex64>,
    pub noise_var: f64,
}

/// Effective channel of slot `n`: `h(absolute index of n)`.
fn slot_channel(channel: &[Complex64], scheme: &MappingScheme, slot: usize) -> Complex64 {
    channel[scheme.absolute_index(slot)]
}

/// Writes the noisy received slots into `out`.
///
/// Active slots carry amplitude `sqrt(P_t / N_A)`, the complementary slot
/// `sqrt(P_t)` in complementary mode.
pub fn transmit_into<R: Rng + ?Sized>(
    block: &ConcatenatedBlock,
    channel: &[Complex64],
    scheme: &MappingScheme,
    snr_tx: f64,
    noise_var: f64,
    rng: &mut R,
    out: &mut Vec<Complex64>,
) {
    let amplitude = (snr_tx).sqrt() * block.power_scale();
    out.clear();
    for (slot, &x) in block.slots().iter().enumerate() {
        let mut y = amplitude * slot_channel(channel, scheme, slot) * x;
        if noise_var > 0.0 {
            y += complex_gaussian(rng, noise_var);
        }
        out.push(y);
    }
}

pub fn transmit_through_hop<R: Rng + ?Sized>(
    block: &ConcatenatedBlock,
    channel: &[Complex64],
    scheme: &MappingScheme,
    rng: &mut R,
    config: &SystemConfig,
) -> HopObservation {
    transmit_with_noise(block, channel, scheme, 1.0, rng, config)
}

pub fn transmit_with_noise<R: Rng + ?Sized>(
    block: &ConcatenatedBlock,
    channel: &[Complex64],
    scheme: &MappingScheme,
    noise_var: f64,
    rng: &mut R,
    config: &SystemConfig,
) -> HopObservation {
    let mut received = Vec::with_capacity(block.slots().len());
    transmit_into(block, channel, scheme, config.snr_tx, noise_var, rng, &mut received);
    HopObservation { received, noise_var }
}

/// The noise-free observation of `block`.
pub fn noiseless_observation(
    block: &ConcatenatedBlock,
    channel: &[Complex64],
    scheme: &MappingScheme,
    config: &SystemConfig,
) -> HopObservation {
    // zero variance: the generator is never drawn from
    let mut rng = crate::channel::RngStream::new(0, 0);
    transmit_with_noise(block, channel, scheme, 0.0, &mut rng, config)
}

/// Squared Frobenius distance between `received` and the noise-free image of
/// `block`.
pub fn hypothesis_distance(
    received: &[Complex64],
    block: &ConcatenatedBlock,
    channel: &[Complex64],
    scheme: &MappingScheme,
    snr_tx: f64,
) -> f64 {
    let amplitude = snr_tx.sqrt() * block.power_scale();
    block
        .slots()
        .iter()
        .enumerate()
        .map(|(slot, &x)| (received[slot] - amplitude * slot_channel(channel, scheme, slot) * x).norm_sqr())
        .sum()
}

/// Exhaustive ML detection over every block in `space`; ties go to the
/// smaller block id.
pub fn ml_detect<'a>(
    obs: &HopObservation,
    channel: &[Complex64],
    scheme: &MappingScheme,
    space: &'a SymbolSpace,
    config: &SystemConfig,
) -> &'a ConcatenatedBlock {
    let mut best = 0;
    let mut best_distance = f64::INFINITY;
    for (id, block) in space.blocks().iter().enumerate() {
        let d = hypothesis_distance(&obs.received, block, channel, scheme, config.snr_tx);
        if d < best_distance {
            best = id;
            best_distance = d;
        }
    }
    space.get(best)
}

/// ML detector that exploits the per-slot separability of the distance.
///
/// For a fixed pattern the distance splits into independent per-slot terms,
/// so the minimum over all `Card(X)` blocks is the minimum over `2^{N_S}`
/// patterns of per-slot nearest-symbol distances. The result is identical to
/// [`ml_detect`] up to exact ties.
#[derive(Debug, Clone)]
pub struct Detector {
    n_selected: usize,
    constellation: Vec<Complex64>,
    // [slot][n_active - 1]: (distance, symbol)
    nearest: Vec<(f64, usize)>,
    energy: Vec<f64>,
    symbols: Vec<usize>,
}

impl Detector {
    pub fn new(config: &SystemConfig) -> Self {
        let n_s = config.n_selected;
        Self {
            n_selected: n_s,
            constellation: (0..config.apm_order).map(|m| psk_symbol(m, config.apm_order)).collect(),
            nearest: vec![(0.0, 0); n_s * n_s],
            energy: vec![0.0; n_s + 1],
            symbols: Vec::with_capacity(n_s),
        }
    }

    fn nearest_symbol(&self, y: Complex64, gain: Complex64) -> (f64, usize) {
        let mut best = (f64::INFINITY, 0);
        for (m, &x) in self.constellation.iter().enumerate() {
            let d = (y - gain * x).norm_sqr();
            if d < best.0 {
                best = (d, m);
            }
        }
        best
    }

    /// Returns the id of the ML block in `space`.
    pub fn detect(
        &mut self,
        received: &[Complex64],
        channel: &[Complex64],
        scheme: &MappingScheme,
        snr_tx: f64,
        space: &SymbolSpace,
    ) -> usize {
        let n_s = self.n_selected;
        let root_p = snr_tx.sqrt();
        for (slot, y) in received.iter().enumerate() {
            self.energy[slot] = y.norm_sqr();
        }
        for slot in 0..n_s {
            let h = slot_channel(channel, scheme, slot) * root_p;
            for n_a in 1..=n_s {
                let gain = h / (n_a as f64).sqrt();
                self.nearest[slot * n_s + n_a - 1] = self.nearest_symbol(received[slot], gain);
            }
        }
        let total_selected: f64 = self.energy[..n_s].iter().sum();
        let comp_energy = self.energy[n_s];

        let (comp_distance, comp_symbol) =
            self.nearest_symbol(received[n_s], slot_channel(channel, scheme, n_s) * root_p);
        let mut best_mask = 0u32;
        let mut best_distance = total_selected + comp_distance;

        for mask in 1u32..(1 << n_s) {
            let n_a = mask.count_ones() as usize;
            let mut d = comp_energy + total_selected;
            for slot in 0..n_s {
                if (mask >> slot) & 1 == 1 {
                    d += self.nearest[slot * n_s + n_a - 1].0 - self.energy[slot];
                }
            }
            if d < best_distance {
                best_distance = d;
                best_mask = mask;
            }
        }

        self.symbols.clear();
        if best_mask == 0 {
            self.symbols.push(comp_symbol);
        } else {
            let n_a = best_mask.count_ones() as usize;
            for slot in 0..n_s {
                if (best_mask >> slot) & 1 == 1 {
                    self.symbols.push(self.nearest[slot * n_s + n_a - 1].1);
                }
            }
        }
        space.id_of(best_mask, &self.symbols)
    }
}

/// Regenerates the relay's decision for the second hop.
///
/// The logical payload (pattern and symbol indices) is kept; the hop-2 scheme
/// only changes which physical subcarriers carry it.
pub fn relay_forward(
    detected: &ConcatenatedBlock,
    scheme_hop2: &MappingScheme,
    config: &SystemConfig,
) -> Result<ConcatenatedBlock> {
    if scheme_hop2.n_selected() != config.n_selected {
        return Err(invalid("hop-2 scheme does not match n_selected"));
    }
    Ok(detected.clone())
}

/// Average rate in bits per channel use over equiprobable patterns:
/// `N_S + log2(M) / 2^{N_S} * (1 + 2^{N_S - 1} N_S)`.
pub fn average_rate(config: &SystemConfig) -> f64 {
    let n_s = config.n_selected as f64;
    let b_m = config.bits_per_symbol() as f64;
    let patterns = config.pattern_count() as f64;
    n_s + b_m / patterns * (1.0 + 0.5 * patterns * n_s)
}
