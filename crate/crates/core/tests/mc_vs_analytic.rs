use imrelay::analytics::{capacity_average, outage_average, outage_conditional, ser_average};
use imrelay::channel::RngStream;
use imrelay::montecarlo::{run_capacity, run_outage, run_ser, sweep, Metric, TrialWorkspace};
use imrelay::pattern::enumerate_patterns;
use imrelay::{Methodology, SystemConfig};

const ADAPTIVE: [Methodology; 2] = [Methodology::Decentralized, Methodology::Centralized];

fn within_sigmas(mc: f64, p: f64, n: u64, sigmas: f64) -> bool {
    let se = (p * (1.0 - p) / n as f64).sqrt();
    (mc - p).abs() <= sigmas * se
}

#[test]
fn conditional_outage_matches_simulation_for_every_pattern() {
    let config = SystemConfig::normalized(4, 2, 2).unwrap().with_snr_db(10.0);
    let trials = 1_000_000u64;
    for methodology in ADAPTIVE {
        for pattern in enumerate_patterns(2).unwrap() {
            let mut ws = TrialWorkspace::new(&config, methodology).unwrap();
            let mut rng = RngStream::new(5, pattern.mask() as u64);
            let stratum = Some(pattern.mask() as u64);
            let hits = (0..trials).filter(|_| ws.outage_trial(&mut rng, stratum)).count();
            let mc = hits as f64 / trials as f64;
            let exact = outage_conditional(methodology, &pattern, 1.0, &config).unwrap();
            assert!(within_sigmas(mc, exact, trials, 3.0), "{methodology} k={}: {mc} vs {exact}", pattern.index());
        }
    }
}

#[test]
fn baseline_outage_matches_simulation() {
    let config = SystemConfig::normalized(4, 2, 2).unwrap().with_snr_db(10.0);
    for methodology in [Methodology::NoAdaptation, Methodology::Fpsk] {
        let est = run_outage(&config, methodology, 400_000, 9).unwrap();
        let exact = outage_average(methodology, 1.0, &config).unwrap();
        assert!(within_sigmas(est.mean, exact, est.trials, 3.0), "{methodology}: {} vs {exact}", est.mean);
    }
}

#[test]
fn outage_threshold_limits() {
    let config = SystemConfig::normalized(4, 2, 2).unwrap().with_snr_db(10.0);
    for methodology in ADAPTIVE {
        let mut low = config;
        low.outage_threshold = 1e-12;
        assert_eq!(run_outage(&low, methodology, 10_000, 1).unwrap().mean, 0.0);
        let mut high = config;
        high.outage_threshold = 1e12;
        assert_eq!(run_outage(&high, methodology, 10_000, 1).unwrap().mean, 1.0);
    }
}

#[test]
fn capacity_matches_closed_form_at_twenty_db() {
    let config = SystemConfig::normalized(4, 2, 2).unwrap().with_snr_db(20.0);
    for methodology in [Methodology::Decentralized, Methodology::Centralized, Methodology::NoAdaptation, Methodology::Fpsk] {
        let est = run_capacity(&config, methodology, 100_000, 2).unwrap();
        let exact = capacity_average(methodology, &config).unwrap();
        assert!(((est.mean - exact) / exact).abs() < 0.02, "{methodology}: {} vs {exact}", est.mean);
    }
}

#[test]
fn capacity_vanishes_at_low_snr_and_grows_with_snr() {
    let config = SystemConfig::normalized(4, 2, 2).unwrap().with_snr_db(-80.0);
    let est = run_capacity(&config, Methodology::Decentralized, 10_000, 3).unwrap();
    assert!(est.mean < 1e-6);
    let mut last = 0.0;
    for db in (0..=40).step_by(5) {
        let v = capacity_average(Methodology::Centralized, &config.with_snr_db(db as f64)).unwrap();
        assert!(v > last);
        last = v;
    }
}

#[test]
fn decentralized_capacity_beats_centralized() {
    let config = SystemConfig::normalized(4, 2, 2).unwrap().with_snr_db(20.0);
    let d = run_capacity(&config, Methodology::Decentralized, 100_000, 4).unwrap();
    let c = run_capacity(&config, Methodology::Centralized, 100_000, 5).unwrap();
    let se = d.std_error.hypot(c.std_error);
    assert!(d.mean - c.mean > 3.0 * se, "{} vs {}", d.mean, c.mean);
}

#[test]
fn error_rate_vanishes_without_noise() {
    let config = SystemConfig::normalized(4, 2, 4).unwrap().with_snr_db(250.0);
    for methodology in [Methodology::Decentralized, Methodology::Centralized, Methodology::Fpsk] {
        assert_eq!(run_ser(&config, methodology, 20_000, 6).unwrap().events, Some(0));
    }
}

#[test]
fn larger_constellations_err_more() {
    let base = SystemConfig::normalized(4, 2, 2).unwrap().with_snr_db(10.0);
    let mut qpsk = base;
    qpsk.apm_order = 4;
    let a = run_ser(&base, Methodology::Decentralized, 50_000, 7).unwrap();
    let b = run_ser(&qpsk, Methodology::Decentralized, 50_000, 8).unwrap();
    assert!(b.mean - a.mean > 3.0 * a.std_error.hypot(b.std_error), "{} vs {}", b.mean, a.mean);
}

#[test]
fn simulated_error_rate_below_union_approximation_at_forty_db() {
    let config = SystemConfig::normalized(4, 2, 2).unwrap().with_snr_db(40.0);
    for methodology in ADAPTIVE {
        let est = run_ser(&config, methodology, 1_000_000, 10).unwrap();
        let approx = ser_average(methodology, &config).unwrap().value;
        assert!(est.mean <= approx, "{methodology}: {} vs {approx}", est.mean);
    }
}

#[test]
fn same_seed_same_estimate() {
    let config = SystemConfig::normalized(8, 4, 2).unwrap().with_snr_db(12.0);
    for methodology in ADAPTIVE {
        assert_eq!(run_outage(&config, methodology, 30_000, 42).unwrap(), run_outage(&config, methodology, 30_000, 42).unwrap());
        assert_ne!(run_capacity(&config, methodology, 30_000, 42).unwrap(), run_capacity(&config, methodology, 30_000, 43).unwrap());
    }
}

#[test]
fn adaptive_outage_beats_fixed_scheme_at_thirty_db() {
    let config = SystemConfig::normalized(4, 1, 2).unwrap();
    let methods = [Methodology::Decentralized, Methodology::Centralized, Methodology::NoAdaptation];
    let rows = sweep(&config, Metric::Outage, &methods, &[30.0], 200_000, 1).unwrap();
    assert_eq!(rows.len(), 3);
    let baseline = rows.iter().find(|r| r.methodology == Methodology::NoAdaptation).unwrap();
    for row in rows.iter().filter(|r| r.methodology.is_adaptive()) {
        let se = row.estimate.std_error.hypot(baseline.estimate.std_error);
        assert!(baseline.estimate.mean - row.estimate.mean > 3.0 * se, "{}", row.methodology);
    }
    let fpsk = sweep(&config, Metric::Outage, &[Methodology::Fpsk], &[10.0, 20.0], 10_000, 1).unwrap();
    assert_eq!(fpsk.len(), 2);
    assert!(fpsk.iter().all(|r| r.analytic.is_some()));
}
