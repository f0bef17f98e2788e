//! Exhaustive reference solver for small instances.

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::{sqdist, Dataset};
use crate::heuristic::CenterSet;
use crate::{Error, Result};

/// Default budget on the number of center subsets.
pub const DEFAULT_LIMIT: u128 = 5_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub opt_value: f64,
    /// Lexicographically smallest optimal index set, ascending.
    pub opt_centers: CenterSet,
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Enumerates every `k`-subset of samples as centers and keeps the best.
pub fn brute_force(d: &Dataset, k: usize, limit: u128) -> Result<OracleResult> {
    let n = d.n_samples();
    if k == 0 || k > n {
        return Err(Error::InvalidK { k, n });
    }
    let needed = binomial(n, k);
    if needed > limit {
        return Err(Error::BudgetExceeded { needed, limit });
    }
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            dist[i * n + j] = sqdist(d.row(i), d.row(j));
        }
    }
    // near[l] holds each sample's distance to the first l chosen centers
    let mut near = vec![vec![f64::INFINITY; n]; k + 1];
    let mut chosen = vec![0usize; k];
    let mut best_v = f64::INFINITY;
    let mut best: Vec<usize> = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        level: usize,
        from: usize,
        n: usize,
        k: usize,
        dist: &[f64],
        near: &mut [Vec<f64>],
        chosen: &mut [usize],
        best_v: &mut f64,
        best: &mut Vec<usize>,
    ) {
        for c in from..=n - (k - level) {
            chosen[level] = c;
            let row = &dist[c * n..(c + 1) * n];
            let (done, rest) = near.split_at_mut(level + 1);
            let prev = &done[level];
            let next = &mut rest[0];
            if level + 1 == k {
                let mut worst = 0.0f64;
                for s in 0..n {
                    let v = if row[s] < prev[s] { row[s] } else { prev[s] };
                    if v > worst {
                        worst = v;
                    }
                }
                if worst < *best_v {
                    *best_v = worst;
                    best.clear();
                    best.extend_from_slice(chosen);
                }
            } else {
                for s in 0..n {
                    next[s] = if row[s] < prev[s] { row[s] } else { prev[s] };
                }
                rec(level + 1, c + 1, n, k, dist, near, chosen, best_v, best);
            }
        }
    }

    rec(0, 0, n, k, &dist, &mut near, &mut chosen, &mut best_v, &mut best);
    Ok(OracleResult {
        opt_value: best_v,
        opt_centers: CenterSet(best),
    })
}
