//! Per-hop Rayleigh block-fading realizations and the distribution functions
//! of sorted channel and link gains.
//!
//! Each hop has `N_T` independent circularly-symmetric Gaussian gains with
//! `E|h|^2 = mu_i`, so `|h|^2 ~ Exp(mean mu_i)`. The "link" gain of a
//! subcarrier is `min(|h_1|^2, |h_2|^2)`, exponential with mean
//! `mu_1 mu_2 / (mu_1 + mu_2)`.
//!
//! Order statistics are counted from the bottom: the `xi`th order statistic
//! is the `xi`th smallest of `N_T` gains, so `xi = N_T` is the strongest.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::combinatorics::binomial_f64;
use crate::config::{Hop, SystemConfig};
use crate::error::{invalid, Result};

/// A reproducible random stream addressed by `(seed, stream_id)`.
///
/// Backed by the counter-based ChaCha8 generator: the stream id selects an
/// independent keystream, so batch `b` of a run always sees the same numbers
/// no matter which worker thread executes it.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// `CN(0, variance)` sample.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let sigma = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(sigma * re, sigma * im)
}

/// Frequency-domain gains of both hops for one block-fading period.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub hop1: Vec<Complex64>,
    pub hop2: Vec<Complex64>,
}

impl ChannelRealization {
    pub fn zeros(n_total: usize) -> Self {
        Self {
            hop1: vec![Complex64::new(0.0, 0.0); n_total],
            hop2: vec![Complex64::new(0.0, 0.0); n_total],
        }
    }

    pub fn hop(&self, hop: Hop) -> &[Complex64] {
        match hop {
            Hop::First => &self.hop1,
            Hop::Second => &self.hop2,
        }
    }

    /// Channel gains `|h_i(n)|^2` of one hop.
    pub fn gains(&self, hop: Hop) -> Vec<f64> {
        self.hop(hop).iter().map(|h| h.norm_sqr()).collect()
    }

    /// Redraws every gain in place.
    pub fn resample<R: Rng + ?Sized>(&mut self, rng: &mut R, config: &SystemConfig) {
        self.hop1.resize(config.n_total, Complex64::new(0.0, 0.0));
        self.hop2.resize(config.n_total, Complex64::new(0.0, 0.0));
        for h in &mut self.hop1 {
            *h = complex_gaussian(rng, config.mean_gain_hop1);
        }
        for h in &mut self.hop2 {
            *h = complex_gaussian(rng, config.mean_gain_hop2);
        }
    }
}

pub fn sample_realization<R: Rng + ?Sized>(rng: &mut R, config: &SystemConfig) -> ChannelRealization {
    let mut realization = ChannelRealization::zeros(config.n_total);
    realization.resample(rng, config);
    realization
}

pub fn exponential_cdf(s: f64, mu: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else {
        -(-s / mu).exp_m1()
    }
}

pub fn exponential_pdf(s: f64, mu: f64) -> f64 {
    if s < 0.0 {
        0.0
    } else {
        (-s / mu).exp() / mu
    }
}

/// Mean of `min` of two independent exponentials with means `mu1`, `mu2`.
pub fn link_mean(mu1: f64, mu2: f64) -> f64 {
    mu1 * mu2 / (mu1 + mu2)
}

fn check_order(xi: usize, n_total: usize) -> Result<()> {
    if xi == 0 || xi > n_total {
        return Err(invalid(format!("order xi must be in 1..={n_total}, got {xi}")));
    }
    Ok(())
}

/// `P(xi-th smallest of n_total i.i.d. Exp(mu) gains <= s)`.
pub fn order_stat_cdf(xi: usize, s: f64, n_total: usize, mu: f64) -> Result<f64> {
    check_order(xi, n_total)?;
    Ok(sorted_cdf(xi, n_total, exponential_cdf(s, mu)))
}

/// Density of the `xi`th smallest of `n_total` i.i.d. `Exp(mu)` gains.
pub fn order_stat_pdf(xi: usize, s: f64, n_total: usize, mu: f64) -> Result<f64> {
    check_order(xi, n_total)?;
    if s < 0.0 {
        return Ok(0.0);
    }
    Ok(sorted_pdf(xi, n_total, exponential_cdf(s, mu), exponential_pdf(s, mu)))
}

/// Binomial tail `Σ_{n=xi}^{N} C(N,n) F^n (1-F)^{N-n}`.
///
/// The smaller tail is summed directly, so small values keep their relative
/// precision and values near 1 stay monotone.
pub(crate) fn sorted_cdf(xi: usize, n_total: usize, f: f64) -> f64 {
    let survive = 1.0 - f;
    let term = |n: usize| binomial_f64(n_total, n) * f.powi(n as i32) * survive.powi((n_total - n) as i32);
    let total = if f <= 0.5 {
        (xi..=n_total).map(term).sum::<f64>()
    } else {
        1.0 - (0..xi).map(term).sum::<f64>()
    };
    total.clamp(0.0, 1.0)
}

pub(crate) fn sorted_pdf(xi: usize, n_total: usize, f: f64, density: f64) -> f64 {
    let coeff = n_total as f64 * binomial_f64(n_total - 1, xi - 1);
    coeff * f.powi(xi as i32 - 1) * (1.0 - f).powi((n_total - xi) as i32) * density
}

/// Density and CDF of one unsorted link gain `min(|h_1|^2, |h_2|^2)`.
pub fn link_gain_distribution(s: f64, mu1: f64, mu2: f64) -> (f64, f64) {
    let mu = link_mean(mu1, mu2);
    (exponential_pdf(s, mu), exponential_cdf(s, mu))
}

pub fn link_order_stat_cdf(xi: usize, s: f64, n_total: usize, mu1: f64, mu2: f64) -> Result<f64> {
    order_stat_cdf(xi, s, n_total, link_mean(mu1, mu2))
}

pub fn link_order_stat_pdf(xi: usize, s: f64, n_total: usize, mu1: f64, mu2: f64) -> Result<f64> {
    order_stat_pdf(xi, s, n_total, link_mean(mu1, mu2))
}
