//! Redundant samples and sample reduction.
//!
//! A sample is redundant for lower bounding in a node when even its best
//! worst-case distance to the center boxes is below the global lower bound:
//! it can never be the sample that attains a node bound. It is redundant for
//! upper bounding when it cannot serve as any cluster's center. Both
//! properties persist in descendants, and a sample with both flags in every
//! open node can be dropped from the working set.

use alloc::vec;
use alloc::vec::Vec;

use crate::assign::AssignmentState;
use crate::bounds::sample_best_max;
use crate::dataset::{sqdist, CenterRegion, Dataset};

/// Per-sample flags of one node, indexed by original sample id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedundancyFlags {
    pub lb: Vec<bool>,
    pub ub: Vec<bool>,
}

impl RedundancyFlags {
    pub fn new(n_samples: usize) -> Self {
        Self {
            lb: vec![false; n_samples],
            ub: vec![false; n_samples],
        }
    }

    #[inline]
    pub fn removable(&self, s: usize) -> bool {
        self.lb[s] && self.ub[s]
    }
}

/// `min_k max_{mu in M^k} ||x - mu||^2 < beta_best`.
pub fn lb_redundant(x: &[f64], m: &CenterRegion, beta_best: f64) -> bool {
    sample_best_max(x, m) < beta_best
}

/// Sample `j` cannot be the center of any cluster: for every `k` it lies
/// outside `M^k` or some sample of `ids` assigned to `k` is farther than
/// `alpha` from it.
pub fn ub_redundant(
    j: usize,
    d: &Dataset,
    m: &CenterRegion,
    st: &AssignmentState,
    ids: &[usize],
    alpha: f64,
) -> bool {
    let x = d.row(j);
    m.boxes.iter().enumerate().all(|(k, b)| {
        !b.contains(x) || st.members(k, ids).any(|i| sqdist(d.row(i), x) > alpha)
    })
}

/// Same test as [`ub_redundant`] with the far-representative mask taken
/// from the sample-based assignment scan.
#[inline]
pub(crate) fn ub_redundant_masked(x: &[f64], m: &CenterRegion, center_far: u64) -> bool {
    m.boxes
        .iter()
        .enumerate()
        .all(|(k, b)| center_far & (1u64 << k) != 0 || !b.contains(x))
}

/// Working samples flagged removable in every given node. No nodes means
/// nothing is removed.
pub fn sample_reduction<'a, I>(nodes: I, alive: &[usize]) -> Vec<usize>
where
    I: IntoIterator<Item = &'a RedundancyFlags>,
{
    let mut keep_going = false;
    let mut removable = vec![true; alive.len()];
    for f in nodes {
        keep_going = true;
        for (r, &s) in removable.iter_mut().zip(alive) {
            *r = *r && f.removable(s);
        }
    }
    if !keep_going {
        return Vec::new();
    }
    alive
        .iter()
        .zip(&removable)
        .filter_map(|(&s, &r)| r.then_some(s))
        .collect()
}

/// The samples still in play, in ascending original index, plus a log of
/// removals as `(iteration, sample)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkingSet {
    alive: Vec<usize>,
    removed: Vec<(u64, usize)>,
}

impl WorkingSet {
    pub fn full(n_samples: usize) -> Self {
        Self {
            alive: (0..n_samples).collect(),
            removed: Vec::new(),
        }
    }

    pub fn alive(&self) -> &[usize] {
        &self.alive
    }

    pub fn removed(&self) -> &[(u64, usize)] {
        &self.removed
    }

    /// Drops `ids` (ascending) from the working set.
    pub fn remove(&mut self, ids: &[usize], iteration: u64) {
        if ids.is_empty() {
            return;
        }
        let mut it = ids.iter().peekable();
        self.alive.retain(|s| {
            if it.peek() == Some(&s) {
                it.next();
                false
            } else {
                true
            }
        });
        self.removed.extend(ids.iter().map(|&s| (iteration, s)));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::AxisBox;

    fn bx(lo: &[f64], hi: &[f64]) -> AxisBox {
        AxisBox::new(lo.to_vec(), hi.to_vec()).unwrap()
    }

    #[test]
    fn lb_examples() {
        let m = CenterRegion::new(vec![bx(&[0.0, 0.0], &[1.0, 1.0])]).unwrap();
        assert!(lb_redundant(&[0.0, 0.0], &m, 3.0));
        assert!(!lb_redundant(&[0.0, 0.0], &m, 2.0));
        assert!(!lb_redundant(&[0.5, 0.5], &m, 0.0));
    }

    #[test]
    fn ub_examples() {
        let d = Dataset::from_rows(&[[0.0], [10.0], [5.0], [-5.0]]).unwrap();
        let ids = [0, 1, 2, 3];
        let st = AssignmentState::new(4, 1).unwrap();
        let m = CenterRegion::new(vec![bx(&[4.0], &[6.0])]).unwrap();
        assert!(ub_redundant(0, &d, &m, &st, &ids, 1.0));
        assert!(!ub_redundant(2, &d, &m, &st, &ids, 1.0));

        // Two clusters, both boxes cover x = 5; reps 0 (cluster 0) and 10
        // (cluster 1) are each 25 away, more than alpha = 20.
        let m = CenterRegion::new(vec![bx(&[-6.0], &[6.0]), bx(&[4.0], &[11.0])]).unwrap();
        let mut st = AssignmentState::new(4, 2).unwrap();
        st.assign(0, 0);
        st.assign(1, 1);
        assert!(ub_redundant(2, &d, &m, &st, &ids, 20.0));
        assert!(!ub_redundant(2, &d, &m, &st, &ids, 30.0));
        // -5 is only in box 0 and 25 from rep 0
        assert!(ub_redundant(3, &d, &m, &st, &ids, 20.0));
    }

    #[test]
    fn reduction_intersects_nodes() {
        let alive = [0, 1, 2];
        let mut a = RedundancyFlags::new(3);
        let mut b = RedundancyFlags::new(3);
        assert!(sample_reduction([&a], &alive).is_empty());
        for s in 0..3 {
            a.lb[s] = true;
            a.ub[s] = true;
        }
        b.lb[1] = true;
        b.ub[1] = true;
        b.lb[2] = true;
        assert_eq!(sample_reduction([&a, &b], &alive), vec![1]);
        assert!(sample_reduction(core::iter::empty(), &alive).is_empty());
    }

    #[test]
    fn working_set_removal() {
        let mut w = WorkingSet::full(5);
        w.remove(&[1, 3], 10);
        assert_eq!(w.alive(), &[0, 2, 4]);
        w.remove(&[4], 20);
        assert_eq!(w.alive(), &[0, 2]);
        assert_eq!(w.removed(), &[(10, 1), (10, 3), (20, 4)]);
    }
}
