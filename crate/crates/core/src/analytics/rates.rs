//! Transmission-rate benchmarks in bits per channel use.

use crate::config::SystemConfig;
use crate::error::{invalid, Result};
use crate::pattern::codebook_count;

/// `(B_classic, B_FPSK)`.
///
/// Classic OFDM IM activates `N_T / 2` subcarriers with combinatorial index
/// mapping: `(N_T/2) log2 M + floor(log2 C(N_T, N_T/2))`. FPSK activates one:
/// `log2 M + floor(log2 N_T)`.
pub fn rate_benchmarks(config: &SystemConfig) -> Result<(f64, f64)> {
    let n_t = config.n_total;
    if n_t % 2 != 0 {
        return Err(invalid("classic OFDM IM rate needs an even n_total"));
    }
    let b_m = config.bits_per_symbol() as u64;
    let index_bits = |count: u64| (63 - count.leading_zeros()) as u64;
    let classic = (n_t as u64 / 2) * b_m + index_bits(codebook_count(n_t, n_t / 2));
    let fpsk = b_m + index_bits(n_t as u64);
    Ok((classic as f64, fpsk as f64))
}
