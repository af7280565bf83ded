//! Exhaustive searches: codebook argmax and maximum-likelihood detection.

use num_complex::Complex64;

/// Every `k`-subset of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The codebook maximising `Σ values[n]` over all `C(N_T, N_S)` subsets,
/// plus the strongest unselected index as complementary subcarrier.
pub fn best_codebook(values: &[f64], n_selected: usize) -> (Vec<usize>, usize) {
    let mut best: Option<(f64, Vec<usize>)> = None;
    for subset in subsets(values.len(), n_selected) {
        let sum: f64 = subset.iter().map(|&i| values[i]).sum();
        if best.as_ref().is_none_or(|(b, _)| sum > *b) {
            best = Some((sum, subset));
        }
    }
    let (_, selected) = best.expect("at least one subset");
    let mut complementary = None;
    for i in 0..values.len() {
        if selected.contains(&i) {
            continue;
        }
        if complementary.is_none_or(|c: usize| values[i] > values[c]) {
            complementary = Some(i);
        }
    }
    (selected, complementary.expect("n_selected < n_total"))
}

/// A candidate block written out directly: per-slot complex values already
/// scaled by `1 / sqrt(max(1, N_A))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub active: Vec<bool>,
    pub symbols: Vec<usize>,
    pub slots: Vec<Complex64>,
}

/// All candidates for `n_selected` slots of `M`-PSK with a complementary
/// slot, enumerated without any shared code.
pub fn all_candidates(n_selected: usize, m: usize) -> Vec<Candidate> {
    let point = |i: usize| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * i as f64 / m as f64);
    let mut out = Vec::new();
    for mask in 0..(1usize << n_selected) {
        let active: Vec<bool> = (0..n_selected).map(|n| mask & (1 << n) != 0).collect();
        let n_a = active.iter().filter(|&&a| a).count();
        let groups = n_a.max(1);
        let amp = 1.0 / (groups as f64).sqrt();
        let mut tuple = vec![0usize; groups];
        loop {
            let mut slots = vec![Complex64::new(0.0, 0.0); n_selected + 1];
            if n_a == 0 {
                slots[n_selected] = point(tuple[0]) * amp;
            } else {
                let mut t = 0;
                for n in 0..n_selected {
                    if active[n] {
                        slots[n] = point(tuple[t]) * amp;
                        t += 1;
                    }
                }
            }
            out.push(Candidate { active: active.clone(), symbols: tuple.clone(), slots });
            // odometer
            let mut pos = 0;
            loop {
                if pos == groups {
                    break;
                }
                tuple[pos] += 1;
                if tuple[pos] < m {
                    break;
                }
                tuple[pos] = 0;
                pos += 1;
            }
            if pos == groups {
                break;
            }
        }
    }
    out
}

/// Index into `candidates` of the block minimising
/// `Σ_n |y_n - sqrt(P) h_n c_n|^2`, with `h` the per-slot channel.
pub fn exhaustive_ml(received: &[Complex64], h_slots: &[Complex64], snr: f64, candidates: &[Candidate]) -> usize {
    let root = snr.sqrt();
    let mut best = (f64::INFINITY, 0);
    for (i, c) in candidates.iter().enumerate() {
        let d: f64 = received
            .iter()
            .zip(h_slots)
            .zip(&c.slots)
            .map(|((y, h), x)| (y - h * x * root).norm_sqr())
            .sum();
        if d < best.0 {
            best = (d, i);
        }
    }
    best.1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(8, 4).len(), 70);
        assert_eq!(all_candidates(2, 2).len(), 10);
        assert_eq!(all_candidates(3, 4).len(), 128);
    }

    #[test]
    fn codebook_example() {
        assert_eq!(best_codebook(&[0.1, 0.9, 0.5, 0.2], 2), (vec![1, 2], 3));
    }
}
