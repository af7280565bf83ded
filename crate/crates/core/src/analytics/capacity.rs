//! Average max-flow min-cut capacity.
//!
//! Per active subcarrier the capacity is `(1/2) log2(1 + min(γ_1, γ_2))`.
//! Every expectation below reduces to sums of
//! `∫ e^{-κ g} ln(1 + g / x) dg = -e^{xκ} Ei(-xκ) / κ`.

use itertools::Itertools;

use crate::combinatorics::{binomial_f64, factorial_f64};
use crate::config::{Methodology, SystemConfig};
use crate::error::{invalid, Error, Result};
use crate::pattern::{enumerate_patterns, ActivationPattern};
use crate::specialfn::{exp_ei_neg_pos, HALF_INV_LN2};

/// Largest `N_S` accepted by [`capacity_average`] for the adaptive schemes.
pub const MAX_CAPACITY_SELECTED: usize = 6;
/// Largest `N_S` for which the permutation sums are enumerated literally.
pub const LITERAL_PERMUTATION_LIMIT: usize = 4;

fn check_order(xi: usize, n_total: usize) -> Result<()> {
    if xi == 0 || xi > n_total {
        return Err(invalid(format!("order must be in 1..={n_total}, got {xi}")));
    }
    Ok(())
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(invalid(format!("x must be finite and > 0, got {x}")));
    }
    Ok(())
}

/// `N! / ((xi - 1)! (N - xi)!)`, the order-statistic density prefactor.
fn density_prefactor(xi: usize, n_total: usize) -> f64 {
    n_total as f64 * binomial_f64(n_total - 1, xi - 1)
}

/// `λ(xi, x) = ∫ (x/2) log2(1 + s) f_(xi)(x s) ds`, i.e.
/// `E[(1/2) log2(1 + g / x)]` for the `xi`th smallest of `n_total`
/// `Exp(mu)` gains.
pub fn lambda_term(xi: usize, x: f64, mu: f64, n_total: usize) -> Result<f64> {
    check_order(xi, n_total)?;
    check_x(x)?;
    let mut sum = 0.0;
    for b in 0..xi {
        let c = (n_total - xi + 1 + b) as f64;
        let sign = if b % 2 == 0 { -1.0 } else { 1.0 };
        sum += binomial_f64(xi - 1, b) * sign * exp_ei_neg_pos(x * c / mu) / c;
    }
    Ok(density_prefactor(xi, n_total) * HALF_INV_LN2 * sum)
}

/// `ν_{i,j}(xi, eta, x) = ∫ (x/2) log2(1 + s) f_{i(xi)}(x s) F_{j(eta)}(x s) ds`.
pub fn nu_term(xi: usize, eta: usize, x: f64, mu_i: f64, mu_j: f64, n_total: usize) -> Result<f64> {
    check_order(xi, n_total)?;
    check_order(eta, n_total)?;
    check_x(x)?;
    let n_t = n_total;
    let mut sum = 0.0;
    for n in eta..=n_t {
        let c_n = binomial_f64(n_t, n);
        for d in 0..=n {
            let c_nd = c_n * binomial_f64(n, d);
            for b in 0..xi {
                let kappa = (n_t - xi + 1 + b) as f64 / mu_i + (n_t + d - n) as f64 / mu_j;
                let sign = if (b + d) % 2 == 0 { -1.0 } else { 1.0 };
                sum += c_nd * binomial_f64(xi - 1, b) * sign * exp_ei_neg_pos(x * kappa) / kappa;
            }
        }
    }
    Ok(density_prefactor(xi, n_t) * HALF_INV_LN2 * sum / mu_i)
}

/// `Λ_G(xi, eta, x) = λ_1 - ν_{1,2} + λ_2 - ν_{2,1}`: the mean of
/// `(1/2) log2(1 + min(g_1, g_2) / x)` with `g_1` the `xi`th order statistic
/// of hop 1 and `g_2` the `eta`th of hop 2.
pub fn capacity_special_g(xi: usize, eta: usize, x: f64, config: &SystemConfig) -> Result<f64> {
    let (mu1, mu2, n_t) = (config.mean_gain_hop1, config.mean_gain_hop2, config.n_total);
    Ok(lambda_term(xi, x, mu1, n_t)? - nu_term(xi, eta, x, mu1, mu2, n_t)? + lambda_term(eta, x, mu2, n_t)?
        - nu_term(eta, xi, x, mu2, mu1, n_t)?)
}

/// `Λ_L(xi, x)`: [`lambda_term`] for the sorted link gains (`mu = mu_Σ`).
pub fn capacity_special_l(xi: usize, x: f64, config: &SystemConfig) -> Result<f64> {
    lambda_term(xi, x, config.link_mean_gain(), config.n_total)
}

/// The top `N_S` orders, `N_T - N_S + 1 ..= N_T`.
fn selected_orders(config: &SystemConfig) -> std::ops::RangeInclusive<usize> {
    (config.n_total - config.n_selected + 1)..=config.n_total
}

/// `C̄(k)` by the literal permutation sums: every ordered `N_A`-tuple of
/// distinct selected orders on each hop, equally likely.
pub fn capacity_conditional_literal(
    methodology: Methodology,
    pattern: &ActivationPattern,
    config: &SystemConfig,
) -> Result<f64> {
    let n_t = config.n_total;
    let n_s = config.n_selected;
    let n_a = pattern.n_active();
    let p = config.snr_tx;
    if n_a == 0 {
        return complementary_capacity(methodology, config);
    }
    let x = n_a as f64 / p;
    let orders: Vec<usize> = selected_orders(config).collect();
    let tuples: Vec<Vec<usize>> = orders.iter().copied().permutations(n_a).collect();
    let weight = factorial_f64(n_s - n_a) / factorial_f64(n_s);
    match methodology {
        Methodology::Decentralized => {
            let base = n_t - n_s + 1;
            let mut table = vec![0.0; n_s * n_s];
            for &xi in &orders {
                for &eta in &orders {
                    table[(xi - base) * n_s + eta - base] = capacity_special_g(xi, eta, x, config)?;
                }
            }
            let mut total = 0.0;
            for t1 in &tuples {
                for t2 in &tuples {
                    let inner: f64 = t1.iter().zip(t2).map(|(&xi, &eta)| table[(xi - base) * n_s + eta - base]).sum();
                    total += weight * weight * inner;
                }
            }
            Ok(total)
        }
        Methodology::Centralized => {
            let mut total = 0.0;
            for t in &tuples {
                let mut inner = 0.0;
                for &xi in t {
                    inner += capacity_special_l(xi, x, config)?;
                }
                total += weight * inner;
            }
            Ok(total)
        }
        other => Err(invalid(format!("{other} has no pattern-conditional capacity"))),
    }
}

/// `C̄(k)` in symmetry-reduced form: each active slot sees a uniformly
/// random selected order on each hop, so
/// `C̄(k) = N_A / N_S^2 Σ_xi Σ_eta Λ_G` (or `N_A / N_S Σ_xi Λ_L`).
pub fn capacity_conditional(
    methodology: Methodology,
    pattern: &ActivationPattern,
    config: &SystemConfig,
) -> Result<f64> {
    let n_s = config.n_selected as f64;
    let n_a = pattern.n_active();
    if n_a == 0 {
        return complementary_capacity(methodology, config);
    }
    class_capacity(methodology, n_a, config, n_s)
}

fn class_capacity(methodology: Methodology, n_a: usize, config: &SystemConfig, n_s: f64) -> Result<f64> {
    let x = n_a as f64 / config.snr_tx;
    let mut total = 0.0;
    match methodology {
        Methodology::Decentralized => {
            for xi in selected_orders(config) {
                for eta in selected_orders(config) {
                    total += capacity_special_g(xi, eta, x, config)?;
                }
            }
            Ok(n_a as f64 / (n_s * n_s) * total)
        }
        Methodology::Centralized => {
            for xi in selected_orders(config) {
                total += capacity_special_l(xi, x, config)?;
            }
            Ok(n_a as f64 / n_s * total)
        }
        other => Err(invalid(format!("{other} has no pattern-conditional capacity"))),
    }
}

/// `C̄(1)`: the complementary subcarrier is the `(N_T - N_S)`th order
/// statistic and carries the full power.
fn complementary_capacity(methodology: Methodology, config: &SystemConfig) -> Result<f64> {
    let order = config.n_total - config.n_selected;
    let x = 1.0 / config.snr_tx;
    match methodology {
        Methodology::Decentralized => capacity_special_g(order, order, x, config),
        Methodology::Centralized => capacity_special_l(order, x, config),
        other => Err(invalid(format!("{other} has no pattern-conditional capacity"))),
    }
}

/// Average capacity over equiprobable patterns, in bit/s/Hz.
///
/// Permutation sums are enumerated literally up to
/// [`LITERAL_PERMUTATION_LIMIT`] selected subcarriers and reduced above. The
/// baselines use unsorted gains.
pub fn capacity_average(methodology: Methodology, config: &SystemConfig) -> Result<f64> {
    match methodology {
        Methodology::NoAdaptation => return Ok(fixed_scheme_capacity(&config.for_methodology(methodology))),
        Methodology::Fpsk => return Ok(fpsk_capacity(config)),
        _ => {}
    }
    if config.n_selected > MAX_CAPACITY_SELECTED {
        return Err(Error::InvalidParameter(format!(
            "capacity permutation sums need n_selected <= {MAX_CAPACITY_SELECTED}, got {}",
            config.n_selected
        )));
    }
    let patterns = enumerate_patterns(config.n_selected)?;
    let mut total = 0.0;
    if config.n_selected <= LITERAL_PERMUTATION_LIMIT {
        for p in &patterns {
            total += capacity_conditional_literal(methodology, p, config)?;
        }
    } else {
        let n_s = config.n_selected;
        total += complementary_capacity(methodology, config)?;
        for n_a in 1..=n_s {
            total += binomial_f64(n_s, n_a) * class_capacity(methodology, n_a, config, n_s as f64)?;
        }
    }
    Ok((total / patterns.len() as f64).max(0.0))
}

/// `E[(1/2) log2(1 + g / x)]` for `g ~ Exp(mu)`.
fn unsorted_half_log(x: f64, mu: f64) -> f64 {
    -HALF_INV_LN2 * exp_ei_neg_pos(x / mu)
}

fn fixed_scheme_capacity(config: &SystemConfig) -> f64 {
    let n_s = config.n_selected;
    let mu = config.link_mean_gain();
    let mut total = unsorted_half_log(1.0 / config.snr_tx, mu);
    for n_a in 1..=n_s {
        let per_slot = unsorted_half_log(n_a as f64 / config.snr_tx, mu);
        total += binomial_f64(n_s, n_a) * n_a as f64 * per_slot;
    }
    total / config.pattern_count() as f64
}

fn fpsk_capacity(config: &SystemConfig) -> f64 {
    unsorted_half_log(1.0 / config.snr_tx, config.link_mean_gain())
}
