//! Farthest First Traversal (Gonzalez) and its multi-start wrapper.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::evaluate_indices;
use crate::dataset::{sqdist, Dataset};
use crate::{Error, Result};

/// Sample indices used as cluster centers, in selection order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CenterSet(pub Vec<usize>);

impl CenterSet {
    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Greedy traversal: start at `start`, then repeatedly add the sample whose
/// distance to the chosen set is largest. Ties go to the lowest index.
pub fn fft(d: &Dataset, k: usize, start: usize) -> Result<CenterSet> {
    let n = d.n_samples();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    if start >= n {
        return Err(Error::InvalidIndex { index: start, n });
    }
    let mut chosen = Vec::with_capacity(k);
    chosen.push(start);
    let mut near: Vec<f64> = (0..n).map(|s| sqdist(d.row(s), d.row(start))).collect();
    while chosen.len() < k {
        let mut far = 0;
        let mut far_d = f64::NEG_INFINITY;
        for (s, &v) in near.iter().enumerate() {
            if v > far_d {
                far_d = v;
                far = s;
            }
        }
        chosen.push(far);
        let c = d.row(far);
        for (s, v) in near.iter_mut().enumerate() {
            let t = sqdist(d.row(s), c);
            if t < *v {
                *v = t;
            }
        }
    }
    Ok(CenterSet(chosen))
}

/// Start indices drawn for `trials` runs; a longer run extends a shorter one.
pub fn trial_starts(n: usize, trials: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| rng.random_range(0..n)).collect()
}

/// Best of `trials` traversals from seeded random starts. Returns the center
/// set and its objective; the first best trial wins ties.
pub fn fft_multistart(
    d: &Dataset,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<(CenterSet, f64)> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1"));
    }
    let all: Vec<usize> = (0..d.n_samples()).collect();
    let mut best: Option<(CenterSet, f64)> = None;
    for start in trial_starts(d.n_samples(), trials, seed) {
        let c = fft(d, k, start)?;
        let v = evaluate_indices(d, c.indices(), &all);
        if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            best = Some((c, v));
        }
    }
    Ok(best.expect("at least one trial"))
}

/// True when no index repeats.
pub fn is_distinct(c: &CenterSet) -> bool {
    let mut seen = vec![false; c.0.iter().copied().max().map_or(0, |m| m + 1)];
    c.0.iter().all(|&i| !core::mem::replace(&mut seen[i], true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> Dataset {
        let rows: Vec<[f64; 1]> = xs.iter().map(|&x| [x]).collect();
        Dataset::from_rows(&rows).unwrap()
    }

    #[test]
    fn picks_farthest() {
        let d = line(&[0.0, 1.0, 10.0]);
        assert_eq!(fft(&d, 2, 0).unwrap().0, vec![0, 2]);
        assert_eq!(fft(&d, 1, 1).unwrap().0, vec![1]);
        let mut all = fft(&d, 3, 1).unwrap().0;
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2]);
    }

    #[test]
    fn preconditions() {
        let d = line(&[0.0, 1.0]);
        assert!(fft(&d, 3, 0).is_err());
        assert!(fft(&d, 0, 0).is_err());
        assert!(fft(&d, 1, 2).is_err());
        assert!(fft_multistart(&d, 1, 0, 0).is_err());
    }

    #[test]
    fn argmax_ties_take_lowest_index() {
        let d = line(&[0.0, -5.0, 5.0]);
        assert_eq!(fft(&d, 2, 0).unwrap().0, vec![0, 1]);
    }

    #[test]
    fn single_trial_matches_plain_fft() {
        let d = line(&[0.0, 3.0, 4.0, 9.0, 20.0]);
        let (c, v) = fft_multistart(&d, 2, 1, 11).unwrap();
        let start = trial_starts(5, 1, 11)[0];
        assert_eq!(c, fft(&d, 2, start).unwrap());
        let all: Vec<usize> = (0..5).collect();
        assert_eq!(v, evaluate_indices(&d, c.indices(), &all));
    }

    #[test]
    fn unit_square_pairs() {
        // Every pair of corners leaves some corner at squared distance >= 1;
        // adjacent pairs achieve exactly 1.
        let d = Dataset::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]).unwrap();
        let all: Vec<usize> = (0..4).collect();
        let mut oracle = f64::INFINITY;
        for i in 0..4 {
            for j in i + 1..4 {
                oracle = oracle.min(evaluate_indices(&d, &[i, j], &all));
            }
        }
        assert_eq!(oracle, 1.0);
        let (_, v) = fft_multistart(&d, 2, 10, 3).unwrap();
        assert_eq!(v, oracle);
    }

    #[test]
    fn starts_are_nested() {
        let a = trial_starts(100, 5, 9);
        let b = trial_starts(100, 50, 9);
        assert_eq!(a[..], b[..5]);
    }
}
