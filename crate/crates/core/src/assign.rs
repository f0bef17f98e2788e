//! Cluster pre-assignment.
//!
//! Two facts about any solution whose objective is at most the incumbent
//! `alpha` drive everything here:
//!
//! * a sample served by center `k` lies within `alpha` of it, so if even the
//!   nearest point of box `k` is farther than `alpha` the sample is not in
//!   cluster `k`;
//! * two samples of one cluster lie within `4 * alpha` of each other.
//!
//! Knowledge is kept per sample as a mask of excluded clusters; once all but
//! one cluster are excluded the sample is assigned.

use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::{sqdist, Dataset};
use crate::heuristic::{fft, CenterSet};
use crate::{Error, Result};

/// Largest supported number of clusters (exclusions are a `u64` bit mask).
pub const MAX_CLUSTERS: usize = 64;

const UNASSIGNED: u8 = u8::MAX;

/// Relative slack on the `4 * alpha` pair test. The test compares a computed
/// distance against a bound derived through the triangle inequality, so a
/// few ulps of rounding could otherwise exclude a legitimate pair.
const PAIR_SLACK: f64 = 1e-12;

#[inline]
pub(crate) fn pair_exceeds(d2: f64, alpha: f64) -> bool {
    d2 > 4.0 * alpha * (1.0 + PAIR_SLACK)
}

/// What a node learned about one sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleUpdate {
    Unchanged,
    Excluded,
    Assigned(usize),
    /// Every cluster is excluded: the node holds no solution within `alpha`.
    Conflict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentState {
    k: usize,
    assigned: Vec<u8>,
    excluded: Vec<u64>,
}

impl AssignmentState {
    pub fn new(n_samples: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidK { k, n: n_samples });
        }
        if k > MAX_CLUSTERS {
            return Err(Error::TooManyClusters {
                k,
                max: MAX_CLUSTERS,
            });
        }
        Ok(Self {
            k,
            assigned: vec![UNASSIGNED; n_samples],
            excluded: vec![0; n_samples],
        })
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn full_mask(&self) -> u64 {
        if self.k == 64 {
            u64::MAX
        } else {
            (1u64 << self.k) - 1
        }
    }

    #[inline]
    pub fn cluster_of(&self, s: usize) -> Option<usize> {
        match self.assigned[s] {
            UNASSIGNED => None,
            c => Some(c as usize),
        }
    }

    #[inline]
    pub fn excluded(&self, s: usize) -> u64 {
        self.excluded[s]
    }

    /// Fixes sample `s` to cluster `c`.
    pub fn assign(&mut self, s: usize, c: usize) {
        self.assigned[s] = c as u8;
        self.excluded[s] = self.full_mask() & !(1u64 << c);
    }

    /// Adds the clusters in `mask` to the exclusions of `s`.
    pub fn exclude(&mut self, s: usize, mask: u64) -> SampleUpdate {
        let mask = mask & self.full_mask();
        if let Some(c) = self.cluster_of(s) {
            return if mask & (1u64 << c) != 0 {
                SampleUpdate::Conflict
            } else {
                SampleUpdate::Unchanged
            };
        }
        let before = self.excluded[s];
        let after = before | mask;
        if after == before {
            return SampleUpdate::Unchanged;
        }
        if after == self.full_mask() {
            return SampleUpdate::Conflict;
        }
        self.excluded[s] = after;
        let open = self.full_mask() & !after;
        if open.count_ones() == 1 {
            let c = open.trailing_zeros() as usize;
            self.assigned[s] = c as u8;
            SampleUpdate::Assigned(c)
        } else {
            SampleUpdate::Excluded
        }
    }

    /// Samples of `ids` assigned to cluster `c`, in `ids` order.
    pub fn members<'a>(&'a self, c: usize, ids: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
        ids.iter()
            .copied()
            .filter(move |&s| self.assigned[s] == c as u8)
    }

    pub fn n_assigned(&self, ids: &[usize]) -> usize {
        ids.iter().filter(|&&s| self.assigned[s] != UNASSIGNED).count()
    }

    /// Up to `cap` assigned samples per cluster (lowest indices first), or
    /// `None` while some cluster has no assigned sample.
    pub fn representatives(&self, ids: &[usize], cap: usize) -> Option<Vec<Vec<usize>>> {
        let mut reps = vec![Vec::new(); self.k];
        for &s in ids {
            if let Some(c) = self.cluster_of(s) {
                if reps[c].len() < cap {
                    reps[c].push(s);
                }
            }
        }
        reps.iter().all(|r| !r.is_empty()).then_some(reps)
    }
}

/// Exclusion mask for one sample from its per-cluster box distances.
#[inline]
pub(crate) fn center_mask(betas: &[f64], alpha: f64) -> u64 {
    let mut m = 0u64;
    for (k, &b) in betas.iter().enumerate() {
        if b > alpha {
            m |= 1u64 << k;
        }
    }
    m
}

/// Result of an assignment pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AssignOutcome {
    pub newly_assigned: usize,
    pub pruned: bool,
}

impl AssignOutcome {
    pub(crate) fn record(&mut self, u: SampleUpdate) {
        match u {
            SampleUpdate::Assigned(_) => self.newly_assigned += 1,
            SampleUpdate::Conflict => self.pruned = true,
            _ => {}
        }
    }
}

/// Center-based assignment. `betas` is row-major `ids.len() x K`: the
/// squared distance from each sample to the nearest point of each box.
pub fn center_based_assign(
    st: &mut AssignmentState,
    ids: &[usize],
    betas: &[f64],
    alpha: f64,
) -> AssignOutcome {
    let k = st.k();
    let mut out = AssignOutcome::default();
    for (i, &s) in ids.iter().enumerate() {
        let mask = center_mask(&betas[i * k..(i + 1) * k], alpha);
        out.record(st.exclude(s, mask));
    }
    out
}

/// Per-sample result of scanning the cluster representatives.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RepDistances {
    /// Clusters with a representative farther than `4 * alpha`.
    pub pair_far: u64,
    /// Clusters with a representative farther than `alpha`: the sample
    /// cannot be that cluster's center.
    pub center_far: u64,
}

/// One pass over `ids` against the representatives of every cluster. The
/// same distances feed both sample-based assignment and upper-bound
/// redundancy.
pub fn scan_representatives(
    d: &Dataset,
    reps: &[Vec<usize>],
    ids: &[usize],
    alpha: f64,
) -> Vec<RepDistances> {
    ids.iter()
        .map(|&s| {
            let x = d.row(s);
            let mut r = RepDistances::default();
            for (k, members) in reps.iter().enumerate() {
                let bit = 1u64 << k;
                for &j in members {
                    let t = sqdist(x, d.row(j));
                    if t > alpha {
                        r.center_far |= bit;
                    }
                    if pair_exceeds(t, alpha) {
                        r.pair_far |= bit;
                        break;
                    }
                }
            }
            r
        })
        .collect()
}

/// Applies sample-based exclusions from a representative scan.
pub(crate) fn apply_pair_exclusions(
    st: &mut AssignmentState,
    ids: &[usize],
    scan: &[RepDistances],
) -> AssignOutcome {
    let mut out = AssignOutcome::default();
    for (&s, r) in ids.iter().zip(scan) {
        if r.pair_far != 0 {
            out.record(st.exclude(s, r.pair_far));
        }
    }
    out
}

/// Sample-based assignment over the working samples `ids`, using at most
/// `cap` representatives per cluster. A no-op until every cluster has an
/// assigned sample.
pub fn sample_based_assign(
    st: &mut AssignmentState,
    d: &Dataset,
    ids: &[usize],
    alpha: f64,
    cap: usize,
) -> AssignOutcome {
    let Some(reps) = st.representatives(ids, cap) else {
        return AssignOutcome::default();
    };
    let scan = scan_representatives(d, &reps, ids, alpha);
    apply_pair_exclusions(st, ids, &scan)
}

/// True when `centers` are distinct samples pairwise farther apart than
/// `4 * alpha`, so each must sit in its own cluster.
pub fn seeds_valid(d: &Dataset, centers: &CenterSet, alpha: f64) -> bool {
    let c = centers.indices();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            if c[i] == c[j] || !pair_exceeds(sqdist(d.row(c[i]), d.row(c[j])), alpha) {
                return false;
            }
        }
    }
    true
}

/// Runs a traversal from sample 0 and keeps it when it passes the seed test.
pub fn find_initial_seeds(d: &Dataset, k: usize, alpha: f64) -> Option<CenterSet> {
    let c = fft(d, k, 0).ok()?;
    seeds_valid(d, &c, alpha).then_some(c)
}
