mod common;

use kcenter_core::bounds::evaluate_indices;
use kcenter_core::heuristic::is_distinct;
use kcenter_core::oracle::DEFAULT_LIMIT;
use kcenter_core::{brute_force, fft, fft_multistart};
use proptest::prelude::*;

proptest! {
    #[test]
    fn traversal_is_a_two_approximation((d, k) in common::instance()) {
        let opt = brute_force(&d, k, DEFAULT_LIMIT).unwrap().opt_value;
        let all: Vec<usize> = (0..d.n_samples()).collect();
        for start in 0..d.n_samples() {
            let c = fft(&d, k, start).unwrap();
            prop_assert_eq!(c.len(), k);
            prop_assert!(is_distinct(&c));
            prop_assert!(evaluate_indices(&d, c.indices(), &all) <= 4.0 * opt);
        }
    }

    #[test]
    fn more_trials_never_hurt((d, k) in common::instance(), seed in any::<u64>()) {
        let mut last = f64::INFINITY;
        for trials in [1, 2, 5, 13] {
            let (_, v) = fft_multistart(&d, k, trials, seed).unwrap();
            prop_assert!(v <= last);
            last = v;
        }
    }
}

#[test]
fn single_trial_is_one_traversal() {
    let (d, k) = common::random_instance(3);
    let all: Vec<usize> = (0..d.n_samples()).collect();
    let start = kcenter_core::heuristic::trial_starts(d.n_samples(), 1, 9)[0];
    let (c, v) = fft_multistart(&d, k, 1, 9).unwrap();
    assert_eq!(c, fft(&d, k, start).unwrap());
    assert_eq!(v, evaluate_indices(&d, c.indices(), &all));
}
