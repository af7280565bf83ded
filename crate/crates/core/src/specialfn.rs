//! Scalar special functions used by the closed-form analytics.
//!
//! * [`ln_gamma`]: `ln Γ(x)` for `x > 0`.
//! * [`exp_ei_neg`]: the product `e^x Ei(-x) = -e^x E_1(x)` for `x > 0`,
//!   evaluated without forming either factor on its own.
//! * [`q_exact`] / [`q_approx`]: the Gaussian tail `Q(x)` and its
//!   two-exponential approximation.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// `zeta(k) - 1` for `k = 2, 3, ...`.
const ZETA_MINUS_ONE: [f64; 26] = [
    0.644_934_066_848_226_4,
    0.202_056_903_159_594_3,
    0.082_323_233_711_138_19,
    0.036_927_755_143_369_93,
    0.017_343_061_984_449_14,
    0.008_349_277_381_922_827,
    0.004_077_356_197_944_339,
    0.002_008_392_826_082_214,
    0.000_994_575_127_818_085_3,
    0.000_494_188_604_119_464_6,
    0.000_246_086_553_308_048_3,
    0.000_122_713_347_578_489_1,
    6.124_813_505_870_483e-5,
    3.058_823_630_702_049e-5,
    1.528_225_940_865_187e-5,
    7.637_197_637_899_762e-6,
    3.817_293_264_999_840e-6,
    1.908_212_716_553_939e-6,
    9.539_620_338_727_961e-7,
    4.769_329_867_878_065e-7,
    2.384_505_027_277_330e-7,
    1.192_199_259_653_111e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504e-8,
    7.450_711_789_835_429e-9,
];

/// Natural logarithm of the gamma function.
///
/// Taylor series around 1 and 2 (where `ln Γ` vanishes), an upward shift
/// into the Stirling region otherwise.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma requires finite x > 0, got {x}")));
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    if (x - 1.0).abs() <= 0.25 {
        let z = x - 1.0;
        return -z.ln_1p() + shifted_series(z);
    }
    if (x - 2.0).abs() <= 0.25 {
        return shifted_series(x - 2.0);
    }
    if x >= 10.0 {
        return stirling(x);
    }
    let shift = (10.0 - x).ceil() as usize;
    let mut product = 1.0;
    for j in 0..shift {
        product *= x + j as f64;
    }
    stirling(x + shift as f64) - product.ln()
}

/// `ln Γ(2 + z)` for small `|z|`: `(1 - γ) z + Σ (-1)^k (ζ(k) - 1) z^k / k`.
fn shifted_series(z: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = -z;
    for (i, c) in ZETA_MINUS_ONE.iter().enumerate() {
        let k = (i + 2) as f64;
        power *= -z;
        sum += c * power / k;
    }
    (1.0 - EULER_GAMMA) * z + sum
}

fn stirling(x: f64) -> f64 {
    // Bernoulli terms B_{2k} / (2k (2k - 1))
    const COEFFS: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut power = inv;
    for c in COEFFS {
        series += c * power;
        power *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + series
}

/// `ln(Γ(a) / Γ(b))`.
pub fn ln_gamma_ratio(a: f64, b: f64) -> Result<f64> {
    Ok(ln_gamma(a)? - ln_gamma(b)?)
}

/// Stable product `e^x Ei(-x)` for `x > 0`; always finite and negative.
///
/// Power series for `x <= 1`, continued fraction of `E_1` below 40 and the
/// asymptotic expansion of `e^x E_1(x)` from 40 upward.
pub fn exp_ei_neg(x: f64) -> Result<f64> {
    if !(x > 0.0) || x.is_nan() {
        return Err(Error::Domain(format!("exp_ei_neg requires x > 0, got {x}")));
    }
    Ok(exp_ei_neg_pos(x))
}

pub(crate) fn exp_ei_neg_pos(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= 1.0 {
        // Ei(-x) = γ + ln x + Σ (-x)^n / (n n!)
        let mut sum = 0.0;
        let mut term = 1.0;
        for n in 1..60 {
            term *= -x / n as f64;
            let contrib = term / n as f64;
            sum += contrib;
            if contrib.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        x.exp() * (EULER_GAMMA + x.ln() + sum)
    } else if x < 40.0 {
        -scaled_e1_continued_fraction(x)
    } else {
        -scaled_e1_asymptotic(x)
    }
}

/// `e^x E_1(x)` by modified Lentz evaluation of the continued fraction.
fn scaled_e1_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// `e^x E_1(x) ~ (1/x) Σ (-1)^n n! / x^n`, truncated at the smallest term.
fn scaled_e1_asymptotic(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    for n in 1..200 {
        let next = -term * n as f64 / x;
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / x
}

/// Gaussian tail probability `Q(x) = erfc(x / sqrt 2) / 2`.
pub fn q_exact(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// `Q(x) ≈ e^{-x^2/2} / 12 + e^{-2x^2/3} / 4`, tight in the exponent for
/// large `x`.
pub fn q_approx(x: f64) -> f64 {
    let x2 = x * x;
    (-0.5 * x2).exp() / 12.0 + (-2.0 * x2 / 3.0).exp() / 4.0
}

/// `1 / (2 ln 2)`, the nats-to-half-bits factor used by the capacity formulas.
pub(crate) const HALF_INV_LN2: f64 = 0.5 / LN_2;
