#![allow(dead_code)]

use kcenter_core::Dataset;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A seeded instance with `S in [8, 25]`, `A in [1, 4]`, `K in [1, 3]`.
/// Odd seeds use a coarse grid so ties and duplicates show up.
pub fn random_instance(seed: u64) -> (Dataset, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = rng.random_range(8..=25);
    let a = rng.random_range(1..=4);
    let k = rng.random_range(1..=3);
    let grid = seed % 2 == 1;
    let values: Vec<f64> = (0..s * a)
        .map(|_| {
            if grid {
                f64::from(rng.random_range(0..6u32)) * 0.5
            } else {
                rng.random_range(-10.0..10.0)
            }
        })
        .collect();
    let d = Dataset::new(s, a, values).unwrap();
    let k = k.min(d.distinct_rows());
    (d, k)
}

/// Small datasets with K no larger than the number of distinct rows.
pub fn instance() -> impl Strategy<Value = (Dataset, usize)> {
    (4usize..14, 1usize..4, 1usize..4, any::<bool>()).prop_flat_map(|(s, a, k, grid)| {
        let coord = if grid {
            (0u8..5).prop_map(f64::from).boxed()
        } else {
            (-50.0f64..50.0).boxed()
        };
        proptest::collection::vec(coord, s * a).prop_map(move |values| {
            let d = Dataset::new(s, a, values).unwrap();
            let k = k.min(d.distinct_rows());
            (d, k)
        })
    })
}
