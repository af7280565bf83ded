//! Exact and high-SNR outage probability.
//!
//! A hop is in outage when any active subcarrier's SNR falls below `s`. The
//! active subcarriers' gains are the top `N_S` order statistics in a uniformly
//! random arrangement, so the weakest active one has order `xi` with
//! probability `Υ(k, xi)`.

use crate::channel::{exponential_cdf, order_stat_cdf};
use crate::combinatorics::binomial_f64;
use crate::config::{Hop, Methodology, SystemConfig};
use crate::error::{invalid, Result};
use crate::pattern::ActivationPattern;

fn check_pattern(pattern: &ActivationPattern, config: &SystemConfig) -> Result<()> {
    if pattern.n_selected() != config.n_selected {
        return Err(invalid(format!(
            "pattern has {} slots, config selects {}",
            pattern.n_selected(),
            config.n_selected
        )));
    }
    Ok(())
}

/// Admissible orders of the weakest active subcarrier when `n_active`
/// subcarriers are active.
pub fn upsilon_support(n_active: usize, config: &SystemConfig) -> std::ops::RangeInclusive<usize> {
    (config.n_total - config.n_selected + 1)..=(config.n_total + 1 - n_active)
}

/// `Υ(k, xi) = C(N_T - xi, N_A - 1) / C(N_S, N_A)`: probability that the
/// weakest of the `N_A` active subcarriers is the `xi`th smallest gain.
pub fn upsilon(pattern: &ActivationPattern, xi: usize, config: &SystemConfig) -> Result<f64> {
    check_pattern(pattern, config)?;
    let n_a = pattern.n_active();
    if n_a == 0 {
        return Err(invalid("Υ is undefined for the complementary pattern k = 1"));
    }
    upsilon_by_weight(n_a, xi, config)
}

pub(crate) fn upsilon_by_weight(n_active: usize, xi: usize, config: &SystemConfig) -> Result<f64> {
    upsilon_counts(config.n_total, config.n_selected, n_active, xi)
}

/// [`upsilon`] from the bare counts `(N_T, N_S, N_A)`, without the
/// power-of-two restriction on `N_T`.
pub fn upsilon_counts(n_total: usize, n_selected: usize, n_active: usize, xi: usize) -> Result<f64> {
    if n_active == 0 || n_active > n_selected || n_selected >= n_total {
        return Err(invalid(format!(
            "need 1 <= N_A <= N_S < N_T, got N_A = {n_active}, N_S = {n_selected}, N_T = {n_total}"
        )));
    }
    let (lo, hi) = (n_total - n_selected + 1, n_total + 1 - n_active);
    if xi < lo || xi > hi {
        return Err(invalid(format!("xi = {xi} outside [{lo}, {hi}] for N_A = {n_active}")));
    }
    Ok(binomial_f64(n_total - xi, n_active - 1) / binomial_f64(n_selected, n_active))
}

/// Outage of one hop with mean gain `mu` given `n_active` active subcarriers
/// (0 = complementary mode).
fn hop_outage_by_weight(n_active: usize, s: f64, mu: f64, config: &SystemConfig) -> Result<f64> {
    let n_t = config.n_total;
    if n_active == 0 {
        return order_stat_cdf(n_t - config.n_selected, s / config.snr_tx, n_t, mu);
    }
    let t = s * n_active as f64 / config.snr_tx;
    let mut total = 0.0;
    for xi in upsilon_support(n_active, config) {
        total += upsilon_by_weight(n_active, xi, config)? * order_stat_cdf(xi, t, n_t, mu)?;
    }
    Ok(total.clamp(0.0, 1.0))
}

/// `P_{o-i}(s | k)` of hop `hop` under per-hop selection.
pub fn outage_conditional_decentralized(
    pattern: &ActivationPattern,
    s: f64,
    hop: Hop,
    config: &SystemConfig,
) -> Result<f64> {
    check_pattern(pattern, config)?;
    hop_outage_by_weight(pattern.n_active(), s, config.mean_gain(hop), config)
}

/// Link outage `P_o(s | k)` under joint selection on `min(g_1, g_2)`.
pub fn outage_conditional_centralized(pattern: &ActivationPattern, s: f64, config: &SystemConfig) -> Result<f64> {
    check_pattern(pattern, config)?;
    hop_outage_by_weight(pattern.n_active(), s, config.link_mean_gain(), config)
}

/// Two-hop outage given the pattern: `P_1 + P_2 - P_1 P_2` for per-hop
/// selection, the link outage for joint selection.
pub fn outage_conditional(
    methodology: Methodology,
    pattern: &ActivationPattern,
    s: f64,
    config: &SystemConfig,
) -> Result<f64> {
    match methodology {
        Methodology::Decentralized => {
            let p1 = outage_conditional_decentralized(pattern, s, Hop::First, config)?;
            let p2 = outage_conditional_decentralized(pattern, s, Hop::Second, config)?;
            Ok(p1 + p2 - p1 * p2)
        }
        Methodology::Centralized => outage_conditional_centralized(pattern, s, config),
        other => Err(invalid(format!("{other} has no pattern-conditional outage"))),
    }
}

/// Average outage over equiprobable patterns.
///
/// The fixed-scheme and FPSK baselines use unsorted exponential gains.
pub fn outage_average(methodology: Methodology, s: f64, config: &SystemConfig) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(invalid(format!("outage threshold must be >= 0, got {s}")));
    }
    match methodology {
        Methodology::Decentralized | Methodology::Centralized => {}
        Methodology::NoAdaptation => return fixed_scheme_outage(s, &config.for_methodology(methodology)),
        Methodology::Fpsk => return Ok(fpsk_outage(s, config)),
    }
    // patterns with equal weight have equal conditional outage
    let n_s = config.n_selected;
    let mut total = 0.0;
    for n_a in 0..=n_s {
        let count = binomial_f64(n_s, n_a);
        let p = match methodology {
            Methodology::Decentralized => {
                let p1 = hop_outage_by_weight(n_a, s, config.mean_gain_hop1, config)?;
                let p2 = hop_outage_by_weight(n_a, s, config.mean_gain_hop2, config)?;
                p1 + p2 - p1 * p2
            }
            _ => hop_outage_by_weight(n_a, s, config.link_mean_gain(), config)?,
        };
        total += count * p;
    }
    Ok((total / config.pattern_count() as f64).clamp(0.0, 1.0))
}

/// Literal average over all `2^{N_S}` patterns; used to pin the
/// weight-class shortcut in [`outage_average`].
pub fn outage_average_enumerated(methodology: Methodology, s: f64, config: &SystemConfig) -> Result<f64> {
    let patterns = crate::pattern::enumerate_patterns(config.n_selected)?;
    let mut total = 0.0;
    for p in &patterns {
        total += outage_conditional(methodology, p, s, config)?;
    }
    Ok(total / patterns.len() as f64)
}

/// High-SNR outage `C(N_T, d) / 2^{N_S} * coeff * (s / P_t)^d` with
/// `d = N_T - N_S`; `coeff = mu_1^{-d} + mu_2^{-d}` for per-hop selection and
/// `mu_Σ^{-d}` for joint selection.
pub fn outage_asymptotic(methodology: Methodology, s: f64, config: &SystemConfig) -> Result<f64> {
    let d = config.diversity_order();
    let coeff = match methodology {
        Methodology::Decentralized => {
            config.mean_gain_hop1.powi(-(d as i32)) + config.mean_gain_hop2.powi(-(d as i32))
        }
        Methodology::Centralized => config.link_mean_gain().powi(-(d as i32)),
        other => return Err(invalid(format!("no asymptotic outage expression for {other}"))),
    };
    let lead = binomial_f64(config.n_total, d) / config.pattern_count() as f64;
    Ok(lead * coeff * (s / config.snr_tx).powi(d as i32))
}

/// Fixed scheme: the `N_S` selected gains are unsorted `Exp(mu_i)`.
fn fixed_scheme_outage(s: f64, config: &SystemConfig) -> Result<f64> {
    let n_s = config.n_selected;
    let hop = |n_a: usize, mu: f64| {
        if n_a == 0 {
            exponential_cdf(s / config.snr_tx, mu)
        } else {
            let t = s * n_a as f64 / config.snr_tx;
            // min of n_a exponentials is exponential with mean mu / n_a
            exponential_cdf(t, mu / n_a as f64)
        }
    };
    let mut total = 0.0;
    for n_a in 0..=n_s {
        let p1 = hop(n_a, config.mean_gain_hop1);
        let p2 = hop(n_a, config.mean_gain_hop2);
        total += binomial_f64(n_s, n_a) * (p1 + p2 - p1 * p2);
    }
    Ok(total / config.pattern_count() as f64)
}

/// FPSK: one full-power subcarrier per use, the same index on both hops.
fn fpsk_outage(s: f64, config: &SystemConfig) -> f64 {
    exponential_cdf(s / config.snr_tx, config.link_mean_gain())
}
