//! Union-bound approximation of the end-to-end block error rate.
//!
//! The pairwise error probability is `Q(sqrt(c P ‖H (Ẋ - X̂)‖²))`, and `Q`
//! is replaced by `e^{-x²/2}/12 + e^{-2x²/3}/4`. Averaging each exponential
//! over an independent order-statistic gain gives its moment generating
//! function, `E[e^{-t g / mu}] = Π_{j = N - xi + 1}^{N} j / (j + t)`, the
//! finite form of `N! Γ(N - xi + 1 + t) / ((N - xi)! Γ(N + 1 + t))`.

use itertools::Itertools;

use crate::block::{psk_symbol, ConcatenatedBlock, SymbolSpace};
use crate::combinatorics::factorial_f64;
use crate::config::{Hop, Methodology, SystemConfig};
use crate::error::{invalid, Error, Result};
use crate::specialfn::ln_gamma;

/// Largest `N_S` and PSK order for which [`ser_average`] enumerates
/// hypothesis pairs and permutations.
pub const MAX_SER_SELECTED: usize = 4;
pub const MAX_SER_ORDER: usize = 4;

/// Constant `c` in the pairwise error argument `Q(sqrt(c P d²))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PepScaling {
    /// `c = 1/2`, consistent with `CN(0, N_0)` noise and the simulated
    /// detector.
    #[default]
    NoiseConsistent,
    /// `c = 1`, as the pairwise expression is usually printed.
    Published,
}

impl PepScaling {
    /// Multipliers of `mu P d²` in the two exponential terms.
    fn exponents(self) -> (f64, f64) {
        match self {
            PepScaling::Published => (0.5, 2.0 / 3.0),
            PepScaling::NoiseConsistent => (0.25, 1.0 / 3.0),
        }
    }
}

/// Whose gains enter `Θ`: one hop's, or the link gains of joint selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaVariant {
    Hop(Hop),
    Link,
}

impl ThetaVariant {
    fn mean_gain(self, config: &SystemConfig) -> f64 {
        match self {
            ThetaVariant::Hop(h) => config.mean_gain(h),
            ThetaVariant::Link => config.link_mean_gain(),
        }
    }
}

/// Orders `Ξ` of the gains behind the selected slots, one per slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderAssignment {
    orders: Vec<usize>,
}

impl OrderAssignment {
    pub fn new(orders: Vec<usize>, config: &SystemConfig) -> Result<Self> {
        let lo = config.n_total - config.n_selected + 1;
        if orders.len() != config.n_selected {
            return Err(invalid(format!(
                "need {} orders, got {}",
                config.n_selected,
                orders.len()
            )));
        }
        if let Some(bad) = orders.iter().find(|&&o| o < lo || o > config.n_total) {
            return Err(invalid(format!("order {bad} outside [{lo}, {}]", config.n_total)));
        }
        if orders.iter().duplicates().next().is_some() {
            return Err(invalid("orders must be distinct"));
        }
        Ok(Self { orders })
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }
}

/// `E[exp(-t g / mu)]` for the `xi`th smallest of `n_total` `Exp(mu)` gains.
pub fn order_mgf(xi: usize, n_total: usize, t: f64) -> f64 {
    (n_total + 1 - xi..=n_total).map(|j| j as f64 / (j as f64 + t)).product()
}

/// [`order_mgf`] through log-gamma; slower, kept as a cross-check.
pub fn order_mgf_gamma(xi: usize, n_total: usize, t: f64) -> Result<f64> {
    let n = n_total as f64;
    let low = (n_total - xi) as f64;
    Ok((ln_gamma(n + 1.0)? - ln_gamma(low + 1.0)? + ln_gamma(low + 1.0 + t)? - ln_gamma(n + 1.0 + t)?).exp())
}

/// Per-slot `|ẋ_n / sqrt(max(1, Ṅ_A)) - x̂_n / sqrt(max(1, N̂_A))|²`, the
/// complementary slot last.
fn slot_distances(x_true: &ConcatenatedBlock, x_hyp: &ConcatenatedBlock, out: &mut Vec<f64>) {
    out.clear();
    out.extend(x_true.normalized_slots().zip(x_hyp.normalized_slots()).map(|(a, b)| (a - b).norm_sqr()));
}

/// `Θ(Ẋ, X̂, Ξ)` with the default [`PepScaling`].
pub fn ser_theta(
    x_true: &ConcatenatedBlock,
    x_hyp: &ConcatenatedBlock,
    orders: &OrderAssignment,
    variant: ThetaVariant,
    config: &SystemConfig,
) -> Result<f64> {
    ser_theta_with(x_true, x_hyp, orders, variant, config, PepScaling::default())
}

pub fn ser_theta_with(
    x_true: &ConcatenatedBlock,
    x_hyp: &ConcatenatedBlock,
    orders: &OrderAssignment,
    variant: ThetaVariant,
    config: &SystemConfig,
    scaling: PepScaling,
) -> Result<f64> {
    let n_s = config.n_selected;
    if x_true.slots().len() != n_s + 1 || x_hyp.slots().len() != n_s + 1 {
        return Err(invalid("blocks do not match n_selected"));
    }
    let mut delta = Vec::with_capacity(n_s + 1);
    slot_distances(x_true, x_hyp, &mut delta);
    let scale = variant.mean_gain(config) * config.snr_tx;
    Ok(theta_from_distances(&delta, orders.orders(), scale, config.n_total, scaling))
}

fn theta_from_distances(delta: &[f64], orders: &[usize], scale: f64, n_total: usize, scaling: PepScaling) -> f64 {
    let (ca, cb) = scaling.exponents();
    let n_s = orders.len();
    let comp_order = n_total - n_s;
    let mut a = order_mgf(comp_order, n_total, ca * scale * delta[n_s]);
    let mut b = order_mgf(comp_order, n_total, cb * scale * delta[n_s]);
    for (&xi, &d) in orders.iter().zip(delta) {
        if d > 0.0 {
            a *= order_mgf(xi, n_total, ca * scale * d);
            b *= order_mgf(xi, n_total, cb * scale * d);
        }
    }
    a / 12.0 + b / 4.0
}

/// Result of [`ser_average`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerApproximation {
    pub value: f64,
    /// Some union bound exceeded 1 and was clipped: the point lies outside
    /// the high-SNR validity region.
    pub clipped: bool,
}

/// Gain statistics behind each slot of one hop.
enum GainModel<'a> {
    /// Permutation-averaged top-`N_S` order statistics.
    Sorted { permutations: &'a [Vec<usize>] },
    /// Unsorted exponential gains.
    Unsorted,
}

/// `Ω(Ẋ)`: the union bound for one hop, before clipping.
fn omega(
    space: &SymbolSpace,
    sent: usize,
    model: &GainModel<'_>,
    scale: f64,
    n_total: usize,
    scaling: PepScaling,
    delta: &mut Vec<f64>,
) -> f64 {
    let (ca, cb) = scaling.exponents();
    let x_true = space.get(sent);
    let mut total = 0.0;
    for (id, x_hyp) in space.blocks().iter().enumerate() {
        if id == sent {
            continue;
        }
        slot_distances(x_true, x_hyp, delta);
        total += match model {
            GainModel::Sorted { permutations } => {
                let sum: f64 = permutations
                    .iter()
                    .map(|orders| theta_from_distances(delta, orders, scale, n_total, scaling))
                    .sum();
                sum / permutations.len() as f64
            }
            GainModel::Unsorted => {
                let mut a = 1.0;
                let mut b = 1.0;
                for &d in delta.iter() {
                    a /= 1.0 + ca * scale * d;
                    b /= 1.0 + cb * scale * d;
                }
                a / 12.0 + b / 4.0
            }
        };
    }
    total
}

/// Union-bound average block error rate with the default [`PepScaling`].
pub fn ser_average(methodology: Methodology, config: &SystemConfig) -> Result<SerApproximation> {
    ser_average_with(methodology, config, PepScaling::default())
}

pub fn ser_average_with(methodology: Methodology, config: &SystemConfig, scaling: PepScaling) -> Result<SerApproximation> {
    if methodology == Methodology::Fpsk {
        return Ok(fpsk_ser(config, scaling));
    }
    let config = config.for_methodology(methodology);
    let n_s = config.n_selected;
    if n_s > MAX_SER_SELECTED || config.apm_order > MAX_SER_ORDER {
        return Err(Error::InvalidParameter(format!(
            "SER union bound needs n_selected <= {MAX_SER_SELECTED} and apm_order <= {MAX_SER_ORDER}, got {n_s} and {}",
            config.apm_order
        )));
    }
    let space = SymbolSpace::new(n_s, config.apm_order)?;
    let orders: Vec<usize> = (config.n_total - n_s + 1..=config.n_total).collect();
    let permutations: Vec<Vec<usize>> = orders.iter().copied().permutations(n_s).collect();
    debug_assert_eq!(permutations.len() as f64, factorial_f64(n_s));
    let model = match methodology {
        Methodology::NoAdaptation => GainModel::Unsorted,
        _ => GainModel::Sorted { permutations: &permutations },
    };
    let p = config.snr_tx;
    let n_t = config.n_total;
    let mut clipped = false;
    let mut clip = |v: f64| {
        if v > 1.0 {
            clipped = true;
            1.0
        } else {
            v
        }
    };
    let mut delta = Vec::with_capacity(n_s + 1);
    let mut total = 0.0;
    for sent in 0..space.len() {
        let pe = match methodology {
            Methodology::Centralized => {
                clip(omega(&space, sent, &model, config.link_mean_gain() * p, n_t, scaling, &mut delta))
            }
            _ => {
                let o1 = clip(omega(&space, sent, &model, config.mean_gain_hop1 * p, n_t, scaling, &mut delta));
                let o2 = clip(omega(&space, sent, &model, config.mean_gain_hop2 * p, n_t, scaling, &mut delta));
                o1 + o2 - o1 * o2
            }
        };
        total += space.prior(sent) * pe;
    }
    Ok(SerApproximation { value: total.clamp(0.0, 1.0), clipped })
}

/// FPSK: `N_T M` equiprobable hypotheses, each a single full-power PSK
/// symbol on one of `N_T` unsorted subcarriers.
fn fpsk_ser(config: &SystemConfig, scaling: PepScaling) -> SerApproximation {
    let (ca, cb) = scaling.exponents();
    let m = config.apm_order;
    let pair = |scale: f64, d: f64, slots: i32| {
        (1.0 + ca * scale * d).powi(-slots) / 12.0 + (1.0 + cb * scale * d).powi(-slots) / 4.0
    };
    let hop = |mu: f64| {
        let scale = mu * config.snr_tx;
        let same_index: f64 = (1..m)
            .map(|j| pair(scale, (psk_symbol(0, m) - psk_symbol(j, m)).norm_sqr(), 1))
            .sum();
        let other_index = ((config.n_total - 1) * m) as f64 * pair(scale, 1.0, 2);
        same_index + other_index
    };
    let o1 = hop(config.mean_gain_hop1);
    let o2 = hop(config.mean_gain_hop2);
    let clipped = o1 > 1.0 || o2 > 1.0;
    let (o1, o2) = (o1.min(1.0), o2.min(1.0));
    SerApproximation { value: o1 + o2 - o1 * o2, clipped }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mgf_product_matches_gamma_ratio() {
        for n_t in [2usize, 4, 8] {
            for xi in 1..=n_t {
                for t in [0.0, 0.3, 7.5, 1e3, 1e5] {
                    let a = order_mgf(xi, n_t, t);
                    let b = order_mgf_gamma(xi, n_t, t).unwrap();
                    // the log-gamma route cancels terms of size (t + N) ln(t + N)
                    let tol = 1e-12 + 1e-15 * (t + 10.0) * (t + 10.0).ln();
                    assert!(((a - b) / b).abs() < tol, "xi={xi} N={n_t} t={t}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn identical_blocks_give_one_third() {
        let config = SystemConfig::normalized(4, 2, 2).unwrap().with_snr(1e3);
        let space = SymbolSpace::new(2, 2).unwrap();
        let orders = OrderAssignment::new(vec![4, 3], &config).unwrap();
        for b in space.blocks() {
            let theta = ser_theta(b, b, &orders, ThetaVariant::Hop(Hop::First), &config).unwrap();
            assert!((theta - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn order_assignment_validation() {
        let config = SystemConfig::normalized(8, 3, 2).unwrap();
        assert!(OrderAssignment::new(vec![6, 7, 8], &config).is_ok());
        assert!(OrderAssignment::new(vec![6, 6, 8], &config).is_err());
        assert!(OrderAssignment::new(vec![5, 7, 8], &config).is_err());
        assert!(OrderAssignment::new(vec![7, 8], &config).is_err());
    }

    #[test]
    fn published_scaling_is_smaller() {
        let config = SystemConfig::normalized(4, 2, 2).unwrap().with_snr(1e3);
        for m in [Methodology::Decentralized, Methodology::Centralized] {
            let a = ser_average_with(m, &config, PepScaling::Published).unwrap().value;
            let b = ser_average_with(m, &config, PepScaling::NoiseConsistent).unwrap().value;
            assert!(a < b);
        }
    }

    #[test]
    fn low_snr_is_clipped_and_flagged() {
        let config = SystemConfig::normalized(4, 2, 2).unwrap().with_snr(1.0);
        let r = ser_average(Methodology::Decentralized, &config).unwrap();
        assert!(r.clipped);
        assert!(r.value <= 1.0);
        let hi = ser_average(Methodology::Decentralized, &config.with_snr(1e4)).unwrap();
        assert!(!hi.clipped);
    }

    #[test]
    fn guards_large_spaces() {
        let config = SystemConfig::normalized(8, 5, 2).unwrap();
        assert!(ser_average(Methodology::Decentralized, &config).is_err());
        let config = SystemConfig::normalized(4, 2, 8).unwrap();
        assert!(ser_average(Methodology::Centralized, &config).is_err());
    }
}
