use imrelay::analytics::{
    capacity_average, outage_asymptotic, outage_average, rate_benchmarks, ser_average, upsilon, upsilon_counts,
};
use imrelay::pattern::enumerate_patterns;
use imrelay::{Methodology, SystemConfig};
use proptest::prelude::*;

const ALL: [Methodology; 4] =
    [Methodology::Decentralized, Methodology::Centralized, Methodology::NoAdaptation, Methodology::Fpsk];

fn scenario() -> impl Strategy<Value = SystemConfig> {
    (2u32..=3, 0usize..8, 1u32..=2, 0.2f64..5.0, 0.2f64..5.0, 0.05f64..4.0).prop_filter_map(
        "n_selected < n_total",
        |(log_n, ns, log_m, mu1, mu2, s)| {
            let n_t = 1usize << log_n;
            let n_s = ns % (n_t - 1) + 1;
            SystemConfig::new(n_t, n_s.min(4), 1 << log_m, mu1, mu2, 1.0, s).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outage_is_a_probability_and_falls_with_snr(config in scenario(), db in -10.0f64..50.0, step in 0.5f64..10.0) {
        for methodology in ALL {
            let a = outage_average(methodology, config.outage_threshold, &config.with_snr_db(db)).unwrap();
            let b = outage_average(methodology, config.outage_threshold, &config.with_snr_db(db + step)).unwrap();
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert!(b <= a, "{methodology}: {b} > {a}");
        }
    }

    #[test]
    fn capacity_is_positive_and_grows_with_snr(config in scenario(), db in -10.0f64..50.0, step in 0.5f64..10.0) {
        for methodology in ALL {
            let a = capacity_average(methodology, &config.with_snr_db(db)).unwrap();
            let b = capacity_average(methodology, &config.with_snr_db(db + step)).unwrap();
            prop_assert!(a > 0.0);
            prop_assert!(b > a, "{methodology}");
        }
    }

    #[test]
    fn error_rate_is_a_probability_and_falls_with_snr(config in scenario().prop_filter("small space", |c| c.n_selected <= 3), db in -5.0f64..50.0, step in 0.5f64..10.0) {
        for methodology in [Methodology::Decentralized, Methodology::Centralized] {
            let a = ser_average(methodology, &config.with_snr_db(db)).unwrap().value;
            let b = ser_average(methodology, &config.with_snr_db(db + step)).unwrap().value;
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert!(b <= a);
        }
    }

    #[test]
    fn asymptote_is_positive(config in scenario(), db in 0.0f64..80.0) {
        for methodology in [Methodology::Decentralized, Methodology::Centralized] {
            prop_assert!(outage_asymptotic(methodology, config.outage_threshold, &config.with_snr_db(db)).unwrap() > 0.0);
        }
    }

    #[test]
    fn rates_are_positive(log_n in 2u32..=6, log_m in 1u32..=4) {
        let config = SystemConfig::normalized(1 << log_n, 1, 1 << log_m).unwrap();
        let (classic, fpsk) = rate_benchmarks(&config).unwrap();
        prop_assert!(classic >= fpsk && fpsk > 0.0);
    }
}

#[test]
fn upsilon_normalizes_for_every_small_system() {
    for n_t in 2..=10 {
        for n_s in 1..n_t {
            for n_a in 1..=n_s {
                let total: f64 = (n_t - n_s + 1..=n_t + 1 - n_a)
                    .map(|xi| upsilon_counts(n_t, n_s, n_a, xi).unwrap())
                    .sum();
                assert!((total - 1.0).abs() < 1e-12, "N_T={n_t} N_S={n_s} N_A={n_a}");
            }
        }
    }
    let config = SystemConfig::normalized(8, 3, 2).unwrap();
    for pattern in enumerate_patterns(3).unwrap().into_iter().filter(|p| !p.is_complementary()) {
        for xi in 6..=8 + 1 - pattern.n_active() {
            let want = upsilon_counts(8, 3, pattern.n_active(), xi).unwrap();
            assert_eq!(upsilon(&pattern, xi, &config).unwrap(), want);
        }
    }
}
