//! Sorted-sample Monte Carlo for order statistics of exponential gains.

use rand::Rng;
use rand_distr::{Distribution, Exp};

/// `n` i.i.d. `Exp(mean mu)` draws, sorted ascending.
pub fn sorted_exponentials<R: Rng + ?Sized>(rng: &mut R, n: usize, mu: f64) -> Vec<f64> {
    let exp = Exp::new(1.0 / mu).expect("positive mean");
    let mut v: Vec<f64> = (0..n).map(|_| exp.sample(rng)).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `n` i.i.d. link gains `min(Exp(mu1), Exp(mu2))`, sorted ascending.
pub fn sorted_link_gains<R: Rng + ?Sized>(rng: &mut R, n: usize, mu1: f64, mu2: f64) -> Vec<f64> {
    let e1 = Exp::new(1.0 / mu1).expect("positive mean");
    let e2 = Exp::new(1.0 / mu2).expect("positive mean");
    let mut v: Vec<f64> = (0..n).map(|_| e1.sample(rng).min(e2.sample(rng))).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Empirical `P(xi-th smallest <= s)` over `samples` draws.
pub fn empirical_order_cdf<R: Rng + ?Sized>(
    rng: &mut R,
    xi: usize,
    n: usize,
    mu: f64,
    s: f64,
    samples: usize,
) -> f64 {
    let hits = (0..samples)
        .filter(|_| sorted_exponentials(rng, n, mu)[xi - 1] <= s)
        .count();
    hits as f64 / samples as f64
}

/// Empirical density of the `xi`th smallest on `[s - h, s + h]`.
pub fn empirical_order_pdf<R: Rng + ?Sized>(
    rng: &mut R,
    xi: usize,
    n: usize,
    mu: f64,
    s: f64,
    h: f64,
    samples: usize,
) -> f64 {
    let hits = (0..samples)
        .filter(|_| {
            let v = sorted_exponentials(rng, n, mu)[xi - 1];
            (v - s).abs() <= h
        })
        .count();
    hits as f64 / (samples as f64 * 2.0 * h)
}
