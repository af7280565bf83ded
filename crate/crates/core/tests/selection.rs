use imrelay::channel::RngStream;
use imrelay::mapping::{select_centralized, select_decentralized};
use imrelay::{MappingScheme, SystemConfig};
use oracles::bruteforce::best_codebook;
use proptest::prelude::*;
use rand::Rng;

fn random_gains(rng: &mut RngStream, n: usize) -> Vec<f64> {
    (0..n).map(|_| -rng.random::<f64>().ln()).collect()
}

#[test]
fn decentralized_agrees_with_exhaustive_codebook_search() {
    let mut rng = RngStream::new(99, 0);
    for n_s in [2, 4, 6] {
        let config = SystemConfig::normalized(8, n_s, 2).unwrap();
        for _ in 0..10_000 {
            let gains = random_gains(&mut rng, 8);
            let (selected, comp) = best_codebook(&gains, n_s);
            let scheme = select_decentralized(&gains, &config).unwrap();
            assert_eq!(scheme.selected(), selected.as_slice());
            assert_eq!(scheme.complementary(), comp);
        }
    }
}

#[test]
fn centralized_agrees_with_exhaustive_search_on_link_gains() {
    let mut rng = RngStream::new(98, 0);
    let config = SystemConfig::normalized(8, 4, 2).unwrap();
    for _ in 0..10_000 {
        let g1 = random_gains(&mut rng, 8);
        let g2 = random_gains(&mut rng, 8);
        let link: Vec<f64> = g1.iter().zip(&g2).map(|(a, b)| a.min(*b)).collect();
        let (selected, comp) = best_codebook(&link, 4);
        let scheme = select_centralized(&g1, &g2, &config).unwrap();
        assert_eq!(scheme.selected(), selected.as_slice());
        assert_eq!(scheme.complementary(), comp);
    }
}

fn gains_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-6f64..50.0, 8)
}

proptest! {
    #[test]
    fn selection_is_scale_invariant(gains in gains_strategy(), scale in 1e-3f64..1e3, n_s in 1usize..8) {
        let config = SystemConfig::normalized(8, n_s, 2).unwrap();
        let scaled: Vec<f64> = gains.iter().map(|g| g * scale).collect();
        let a = select_decentralized(&gains, &config).unwrap();
        let b = select_decentralized(&scaled, &config).unwrap();
        // scaling can only reorder exact ties, which these draws avoid
        prop_assume!(gains.iter().enumerate().all(|(i, g)| gains[i + 1..].iter().all(|h| h != g)));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn selected_gains_dominate(gains in gains_strategy(), n_s in 1usize..8) {
        let config = SystemConfig::normalized(8, n_s, 2).unwrap();
        let scheme = select_decentralized(&gains, &config).unwrap();
        let weakest = scheme.selected().iter().map(|&i| gains[i]).fold(f64::INFINITY, f64::min);
        let comp = gains[scheme.complementary()];
        prop_assert!(weakest >= comp);
        for n in 0..8 {
            if n != scheme.complementary() && !scheme.selected().contains(&n) {
                prop_assert!(gains[n] <= comp);
            }
        }
    }

    #[test]
    fn relative_slots_map_to_increasing_absolute_indices(
        picked in prop::sample::subsequence((0..16usize).collect::<Vec<_>>(), 1..15),
    ) {
        let comp = (0..16).find(|n| !picked.contains(n)).unwrap();
        let mut shuffled = picked.clone();
        shuffled.reverse();
        let scheme = MappingScheme::new(shuffled, comp, 16).unwrap();
        let abs: Vec<usize> = (0..picked.len()).map(|s| scheme.absolute_index(s)).collect();
        prop_assert!(abs.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(abs, picked.clone());
        prop_assert_eq!(scheme.absolute_index(picked.len()), comp);
    }
}
