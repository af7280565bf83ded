//! Subcarrier activation patterns and the counting functions built on them.
//!
//! A pattern is the on-off state of the `N_S` selected subcarriers. Bits are
//! read little-endian: bit `n` of the mask is the state of relative slot `n`,
//! and the pattern index is `k = 1 + mask`, so `k = 1` is the all-zero
//! pattern that triggers complementary transmission and `k = 2^{N_S}` is the
//! all-one pattern.

use crate::combinatorics::binomial;
use crate::config::MAX_SELECTED;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ActivationPattern {
    n_selected: usize,
    mask: u32,
}

impl ActivationPattern {
    pub fn from_mask(n_selected: usize, mask: u32) -> Result<Self> {
        if n_selected == 0 || n_selected > MAX_SELECTED {
            return Err(invalid(format!(
                "n_selected must be in 1..={MAX_SELECTED}, got {n_selected}"
            )));
        }
        if u64::from(mask) >= 1u64 << n_selected {
            return Err(invalid(format!(
                "mask {mask:#b} has bits beyond the {n_selected} selected slots"
            )));
        }
        Ok(Self { n_selected, mask })
    }

    /// Pattern with index `k` in `1..=2^{N_S}`.
    pub fn from_index(n_selected: usize, index_k: usize) -> Result<Self> {
        if index_k == 0 {
            return Err(invalid("pattern index k starts at 1"));
        }
        let mask = u32::try_from(index_k - 1).map_err(|_| invalid("pattern index too large"))?;
        Self::from_mask(n_selected, mask)
    }

    /// Pattern whose slot `n` is active iff `bits[n] == 1`.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let mut mask = 0u32;
        for (n, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => mask |= 1 << n,
                other => return Err(invalid(format!("index bit must be 0 or 1, got {other}"))),
            }
        }
        Self::from_mask(bits.len(), mask)
    }

    pub(crate) fn from_mask_unchecked(n_selected: usize, mask: u32) -> Self {
        debug_assert!(u64::from(mask) < 1u64 << n_selected);
        Self { n_selected, mask }
    }

    pub fn n_selected(&self) -> usize {
        self.n_selected
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    /// The 1-based pattern index `k`.
    pub fn index(&self) -> usize {
        self.mask as usize + 1
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.n_selected).map(|n| ((self.mask >> n) & 1) as u8).collect()
    }

    /// Number of active slots `N_A(k)`, the Hamming weight of the bits.
    pub fn n_active(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Active relative slots (0-based) in ascending order.
    pub fn active_slots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_selected).filter(move |n| self.is_active(*n))
    }

    pub fn active_set(&self) -> Vec<usize> {
        self.active_slots().collect()
    }

    pub fn is_active(&self, slot: usize) -> bool {
        slot < self.n_selected && (self.mask >> slot) & 1 == 1
    }

    /// True for `k = 1`, where the complementary subcarrier carries the symbol.
    pub fn is_complementary(&self) -> bool {
        self.mask == 0
    }

    /// Number of PSK symbols carried: `max{1, N_A(k)}`.
    pub fn symbol_count(&self) -> usize {
        self.n_active().max(1)
    }
}

/// All `2^{N_S}` patterns in ascending `k`.
pub fn enumerate_patterns(n_selected: usize) -> Result<Vec<ActivationPattern>> {
    if n_selected == 0 || n_selected > MAX_SELECTED {
        return Err(invalid(format!(
            "n_selected must be in 1..={MAX_SELECTED}, got {n_selected}"
        )));
    }
    Ok((0..1u32 << n_selected)
        .map(|mask| ActivationPattern::from_mask_unchecked(n_selected, mask))
        .collect())
}

/// Number of mapping schemes, `C(N_T, N_S)`.
pub fn codebook_count(n_total: usize, n_selected: usize) -> u64 {
    binomial(n_total as u64, n_selected as u64)
}

/// Number of distinct concatenated blocks, `M + (1 + M)^{N_S} - 1`.
pub fn symbol_space_size(n_selected: usize, apm_order: usize) -> u64 {
    let m = apm_order as u64;
    m + (1 + m).pow(n_selected as u32) - 1
}
