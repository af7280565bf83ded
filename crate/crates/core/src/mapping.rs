//! Mapping-scheme and complementary-subcarrier selection.
//!
//! Maximising the summed SNR of an `N_S`-subset (all selected subcarriers
//! active, equal power) is the same as taking the `N_S` largest gains, so the
//! argmax over `C(N_T, N_S)` codebooks reduces to a partial sort. Ties go to
//! the smaller absolute index.

use crate::channel::ChannelRealization;
use crate::config::{Hop, Methodology, SystemConfig};
use crate::error::{invalid, Result};

/// Selected subcarriers (absolute, 0-based, ascending) plus the standby
/// complementary subcarrier.
///
/// Relative slot `n` maps to `selected[n]`, the `n`th smallest selected
/// absolute index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MappingScheme {
    selected: Vec<usize>,
    complementary: usize,
}

impl MappingScheme {
    pub fn new(mut selected: Vec<usize>, complementary: usize, n_total: usize) -> Result<Self> {
        selected.sort_unstable();
        if selected.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("selected subcarriers must be distinct"));
        }
        if selected.is_empty() || selected.len() >= n_total {
            return Err(invalid(format!(
                "need 1 <= |selected| < {n_total}, got {}",
                selected.len()
            )));
        }
        if selected.iter().chain([&complementary]).any(|&n| n >= n_total) {
            return Err(invalid(format!("subcarrier index out of range 0..{n_total}")));
        }
        if selected.binary_search(&complementary).is_ok() {
            return Err(invalid(format!(
                "complementary subcarrier {complementary} is already selected"
            )));
        }
        Ok(Self { selected, complementary })
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn complementary(&self) -> usize {
        self.complementary
    }

    pub fn n_selected(&self) -> usize {
        self.selected.len()
    }

    /// Absolute subcarrier for relative slot `slot`; slot `N_S` is the
    /// complementary subcarrier.
    pub fn absolute_index(&self, slot: usize) -> usize {
        if slot == self.selected.len() {
            self.complementary
        } else {
            self.selected[slot]
        }
    }

    /// Absolute subcarriers behind slots `0..=N_S`.
    pub fn slot_subcarriers(&self) -> impl Iterator<Item = usize> + '_ {
        self.selected.iter().copied().chain([self.complementary])
    }
}

/// The schemes used on each hop for one block-fading period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionResult {
    pub scheme_hop1: MappingScheme,
    pub scheme_hop2: MappingScheme,
    pub methodology: Methodology,
}

impl SelectionResult {
    pub fn scheme(&self, hop: Hop) -> &MappingScheme {
        match hop {
            Hop::First => &self.scheme_hop1,
            Hop::Second => &self.scheme_hop2,
        }
    }
}

/// Reusable ranking buffer so the trial loops do not allocate.
#[derive(Debug, Clone, Default)]
pub struct SchemeSelector {
    order: Vec<usize>,
}

impl SchemeSelector {
    /// Overwrites `out` with the top-`n_selected` scheme for `values`.
    pub fn select_into(&mut self, values: &[f64], n_selected: usize, out: &mut MappingScheme) {
        debug_assert!(n_selected < values.len());
        self.order.clear();
        self.order.extend(0..values.len());
        self.order.sort_unstable_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
        out.selected.clear();
        out.selected.extend_from_slice(&self.order[..n_selected]);
        out.selected.sort_unstable();
        out.complementary = self.order[n_selected];
    }

    pub fn select(&mut self, values: &[f64], n_selected: usize) -> MappingScheme {
        let mut out = MappingScheme { selected: Vec::with_capacity(n_selected), complementary: 0 };
        self.select_into(values, n_selected, &mut out);
        out
    }
}

fn check_gains(gains: &[f64], config: &SystemConfig) -> Result<()> {
    if gains.len() != config.n_total {
        return Err(invalid(format!(
            "expected {} gains, got {}",
            config.n_total,
            gains.len()
        )));
    }
    if gains.iter().any(|g| !(*g >= 0.0)) {
        return Err(invalid("gains must be non-negative"));
    }
    Ok(())
}

/// Per-hop selection: the `N_S` strongest subcarriers of this hop, with the
/// strongest unselected one as complementary subcarrier.
pub fn select_decentralized(gains: &[f64], config: &SystemConfig) -> Result<MappingScheme> {
    check_gains(gains, config)?;
    Ok(SchemeSelector::default().select(gains, config.n_selected))
}

/// Joint selection on the per-subcarrier link gain `min(g1[n], g2[n])`.
pub fn select_centralized(gains1: &[f64], gains2: &[f64], config: &SystemConfig) -> Result<MappingScheme> {
    check_gains(gains1, config)?;
    check_gains(gains2, config)?;
    let link: Vec<f64> = gains1.iter().zip(gains2).map(|(a, b)| a.min(*b)).collect();
    Ok(SchemeSelector::default().select(&link, config.n_selected))
}

/// Fixed scheme `{0..N_S}` with complementary subcarrier `N_S`, on both hops.
pub fn default_scheme(config: &SystemConfig) -> SelectionResult {
    let scheme = MappingScheme {
        selected: (0..config.n_selected).collect(),
        complementary: config.n_selected,
    };
    SelectionResult {
        scheme_hop1: scheme.clone(),
        scheme_hop2: scheme,
        methodology: Methodology::NoAdaptation,
    }
}

/// Schemes for both hops under `methodology`.
pub fn select(
    methodology: Methodology,
    realization: &ChannelRealization,
    config: &SystemConfig,
) -> Result<SelectionResult> {
    match methodology {
        Methodology::Decentralized => Ok(SelectionResult {
            scheme_hop1: select_decentralized(&realization.gains(Hop::First), config)?,
            scheme_hop2: select_decentralized(&realization.gains(Hop::Second), config)?,
            methodology,
        }),
        Methodology::Centralized => {
            let scheme = select_centralized(
                &realization.gains(Hop::First),
                &realization.gains(Hop::Second),
                config,
            )?;
            Ok(SelectionResult { scheme_hop1: scheme.clone(), scheme_hop2: scheme, methodology })
        }
        Methodology::NoAdaptation => Ok(default_scheme(config)),
        Methodology::Fpsk => Err(invalid("FPSK does not use an index-modulation mapping scheme")),
    }
}
