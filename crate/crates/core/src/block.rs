//! PSK constellation, concatenated symbol blocks and the set of all blocks.
//!
//! A concatenated block has `N_S + 1` slots: the `N_S` selected subcarriers
//! in relative order followed by the complementary subcarrier. In regular
//! mode the active slots carry unit-modulus PSK symbols and the last slot is
//! zero; in complementary mode (`k = 1`) only the last slot is non-zero.
//! Power scaling is applied by the transmitter, not stored in the block.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::pattern::{enumerate_patterns, ActivationPattern};

/// Unit-modulus PSK point `exp(j 2 pi m / M)` for a 0-based index `m`.
pub fn psk_symbol(index: usize, apm_order: usize) -> Complex64 {
    if apm_order == 2 {
        // exact +-1 keeps the BPSK tests free of rounding noise
        return if index == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(-1.0, 0.0) };
    }
    Complex64::from_polar(1.0, 2.0 * PI * index as f64 / apm_order as f64)
}

/// Bit label (as an integer, MSB first) carried by PSK point `index`.
///
/// Gray labelling, complemented so that BPSK maps bit `1` to `+1` and bit
/// `0` to `-1`. Neighbouring points differ in exactly one bit for every `M`.
pub fn psk_label(index: usize, apm_order: usize) -> usize {
    (index ^ (index >> 1)) ^ (apm_order - 1)
}

/// Inverse of [`psk_label`].
pub fn psk_index_for_label(label: usize, apm_order: usize) -> usize {
    let mut g = label ^ (apm_order - 1);
    let mut index = 0;
    while g != 0 {
        index ^= g;
        g >>= 1;
    }
    index
}

/// Transmit/receive unit `X(k) = <x(k), chi>` of `N_S + 1` complex slots.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcatenatedBlock {
    pattern: ActivationPattern,
    symbols: Vec<usize>,
    slots: Vec<Complex64>,
}

impl ConcatenatedBlock {
    /// Builds the block for `pattern` carrying PSK indices `symbols`, one per
    /// active slot in ascending slot order (a single one in complementary mode).
    pub fn new(pattern: ActivationPattern, symbols: Vec<usize>, apm_order: usize) -> Result<Self> {
        if symbols.len() != pattern.symbol_count() {
            return Err(invalid(format!(
                "pattern k={} carries {} symbols, got {}",
                pattern.index(),
                pattern.symbol_count(),
                symbols.len()
            )));
        }
        if let Some(bad) = symbols.iter().find(|&&m| m >= apm_order) {
            return Err(invalid(format!("PSK index {bad} out of range for M={apm_order}")));
        }
        let n_s = pattern.n_selected();
        let mut slots = vec![Complex64::new(0.0, 0.0); n_s + 1];
        if pattern.is_complementary() {
            slots[n_s] = psk_symbol(symbols[0], apm_order);
        } else {
            for (slot, &m) in pattern.active_slots().zip(&symbols) {
                slots[slot] = psk_symbol(m, apm_order);
            }
        }
        Ok(Self { pattern, symbols, slots })
    }

    pub fn pattern(&self) -> ActivationPattern {
        self.pattern
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn slots(&self) -> &[Complex64] {
        &self.slots
    }

    /// Index of the complementary slot, `N_S`.
    pub fn complementary_slot(&self) -> usize {
        self.slots.len() - 1
    }

    /// Per-slot amplitude relative to `sqrt(P_t)`: `1 / sqrt(max{1, N_A})`.
    pub fn power_scale(&self) -> f64 {
        1.0 / (self.pattern.symbol_count() as f64).sqrt()
    }

    /// Slots after power normalisation, i.e. `X(k) / sqrt(max{1, N_A(k)})`.
    pub fn normalized_slots(&self) -> impl Iterator<Item = Complex64> + '_ {
        let scale = self.power_scale();
        self.slots.iter().map(move |&x| x * scale)
    }
}

/// Every concatenated block for a given `(N_S, M)`, with a dense id per block.
///
/// Ids are grouped by pattern mask; within a mask the symbol tuple is read
/// as base-`M` digits with the first symbol least significant.
#[derive(Debug, Clone)]
pub struct SymbolSpace {
    n_selected: usize,
    apm_order: usize,
    offsets: Vec<usize>,
    blocks: Vec<ConcatenatedBlock>,
}

impl SymbolSpace {
    pub fn new(n_selected: usize, apm_order: usize) -> Result<Self> {
        if apm_order < 2 || !apm_order.is_power_of_two() {
            return Err(invalid(format!("apm_order must be a power of two >= 2, got {apm_order}")));
        }
        let size = crate::pattern::symbol_space_size(n_selected, apm_order);
        if size > 1 << 22 {
            return Err(crate::error::Error::Intractable(format!(
                "{size} candidate blocks for N_S={n_selected}, M={apm_order}"
            )));
        }
        let mut offsets = Vec::with_capacity(1 << n_selected);
        let mut blocks = Vec::with_capacity(size as usize);
        for pattern in enumerate_patterns(n_selected)? {
            offsets.push(blocks.len());
            let count = pattern.symbol_count();
            let tuples = apm_order.pow(count as u32);
            for code in 0..tuples {
                let symbols = (0..count)
                    .map(|t| (code / apm_order.pow(t as u32)) % apm_order)
                    .collect();
                blocks.push(ConcatenatedBlock::new(pattern, symbols, apm_order)?);
            }
        }
        Ok(Self { n_selected, apm_order, offsets, blocks })
    }

    pub fn n_selected(&self) -> usize {
        self.n_selected
    }

    pub fn apm_order(&self) -> usize {
        self.apm_order
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[ConcatenatedBlock] {
        &self.blocks
    }

    pub fn get(&self, id: usize) -> &ConcatenatedBlock {
        &self.blocks[id]
    }

    /// Ids of every block with pattern `mask`.
    pub fn pattern_ids(&self, mask: u32) -> std::ops::Range<usize> {
        let start = self.offsets[mask as usize];
        let end = self.offsets.get(mask as usize + 1).copied().unwrap_or(self.blocks.len());
        start..end
    }

    pub fn id_of(&self, mask: u32, symbols: &[usize]) -> usize {
        let code = symbols
            .iter()
            .rev()
            .fold(0, |acc, &m| acc * self.apm_order + m);
        self.offsets[mask as usize] + code
    }

    pub fn id_of_block(&self, block: &ConcatenatedBlock) -> usize {
        self.id_of(block.pattern().mask(), block.symbols())
    }

    /// Probability that block `id` is sent when patterns are equiprobable and
    /// every PSK symbol is uniform: `1 / (2^{N_S} M^{max{1, N_A}})`.
    pub fn prior(&self, id: usize) -> f64 {
        let count = self.blocks[id].pattern().symbol_count();
        1.0 / ((1u64 << self.n_selected) as f64 * (self.apm_order as f64).powi(count as i32))
    }
}
