//! Bounds tightening of the per-cluster center boxes.
//!
//! Every rule keeps all center tuples of the node whose objective is at most
//! the incumbent, so the tightened region still holds an optimal tuple
//! whenever the input region did and the incumbent is not already optimal.

use alloc::vec;
use alloc::vec::Vec;

use crate::assign::AssignmentState;
use crate::dataset::{sqdist, AxisBox, CenterRegion, Dataset};
use crate::parallel::{Executor, Serial};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TightenConfig {
    /// Ball tightening uses at most this many assigned samples per cluster;
    /// above it the box relaxation with all assigned samples runs first.
    pub ball_threshold: usize,
    /// Ball/box and centers-on-samples shrinking. When off, the region is
    /// only scanned for occupancy.
    pub bounds_tightening: bool,
    /// Order the first attribute of the centers.
    pub symmetry: bool,
}

impl Default for TightenConfig {
    fn default() -> Self {
        Self {
            ball_threshold: 50,
            bounds_tightening: true,
            symmetry: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TightenOutcome {
    pub region: CenterRegion,
    /// Number of working samples that may still serve as center `k`.
    pub counts: Vec<usize>,
    /// Bounding box of those samples per cluster.
    pub occupied: Vec<AxisBox>,
    /// Lowest-index such sample per cluster.
    pub first: Vec<Option<usize>>,
    pub infeasible: bool,
}

impl TightenOutcome {
    /// Every cluster is down to one distinct candidate point.
    pub fn is_terminal(&self) -> bool {
        !self.infeasible && self.occupied.iter().all(AxisBox::is_degenerate)
    }
}

/// Samples inside a box (and inside every ball), summarized.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Membership {
    pub bbox: AxisBox,
    pub count: usize,
    pub first: Option<usize>,
}

impl Membership {
    fn new(dim: usize) -> Self {
        Self {
            bbox: AxisBox::empty(dim),
            count: 0,
            first: None,
        }
    }

    /// Merges a later partition into this one.
    pub fn merge(&mut self, other: &Membership) {
        self.bbox.merge(&other.bbox);
        self.count += other.count;
        if self.first.is_none() {
            self.first = other.first;
        }
    }
}

#[inline]
fn within_balls(d: &Dataset, x: &[f64], balls: &[usize], alpha: f64) -> bool {
    balls.iter().all(|&j| sqdist(x, d.row(j)) <= alpha)
}

/// Membership of `ids` in every box, honoring the per-cluster balls.
pub(crate) fn membership_scan(
    d: &Dataset,
    ids: &[usize],
    boxes: &[AxisBox],
    balls: &[Vec<usize>],
    alpha: f64,
) -> Vec<Membership> {
    let mut out: Vec<Membership> = boxes.iter().map(|b| Membership::new(b.dim())).collect();
    for &s in ids {
        let x = d.row(s);
        for (k, b) in boxes.iter().enumerate() {
            if b.is_empty() || !b.contains(x) {
                continue;
            }
            if !balls.is_empty() && !within_balls(d, x, &balls[k], alpha) {
                continue;
            }
            let m = &mut out[k];
            m.bbox.include(x);
            m.count += 1;
            if m.first.is_none() {
                m.first = Some(s);
            }
        }
    }
    out
}

pub(crate) fn membership<E: Executor>(
    exec: &E,
    d: &Dataset,
    ids: &[usize],
    boxes: &[AxisBox],
    balls: &[Vec<usize>],
    alpha: f64,
) -> Vec<Membership> {
    let parts = exec.map_partitions(ids.len(), |r| {
        membership_scan(d, &ids[r], boxes, balls, alpha)
    });
    let mut acc: Vec<Membership> = boxes.iter().map(|b| Membership::new(b.dim())).collect();
    for p in &parts {
        for (a, m) in acc.iter_mut().zip(p) {
            a.merge(m);
        }
    }
    acc
}

/// Smallest box holding the samples of `X ∩ box` within `alpha` of each of
/// the first `max_balls` assigned samples; the empty marker when none remain.
pub fn ball_bt(
    d: &Dataset,
    ids: &[usize],
    b: &AxisBox,
    assigned: &[usize],
    alpha: f64,
    max_balls: usize,
) -> AxisBox {
    let balls = vec![assigned[..assigned.len().min(max_balls)].to_vec()];
    let m = membership_scan(d, ids, core::slice::from_ref(b), &balls, alpha);
    m.into_iter().next().expect("one box").bbox
}

/// `box ∩ R(x_j)` over all assigned points, where `R(x_j)` is the cube of
/// half-width `sqrt(alpha)` around `x_j`. The cube is widened by one ulp on
/// each side so that rounding never cuts off a point of the ball.
pub fn box_bt<P: AsRef<[f64]>>(b: &AxisBox, assigned_points: &[P], alpha: f64) -> AxisBox {
    let mut out = b.clone();
    let r = libm::sqrt(alpha).next_up();
    for p in assigned_points {
        for (a, &v) in p.as_ref().iter().enumerate() {
            let lo = (v - r).next_down();
            let hi = (v + r).next_up();
            if lo > out.lo[a] {
                out.lo[a] = lo;
            }
            if hi < out.hi[a] {
                out.hi[a] = hi;
            }
        }
    }
    if out.is_empty() {
        AxisBox::empty(b.dim())
    } else {
        out
    }
}

/// Smallest box holding `X ∩ box`, and the number of such samples.
pub fn centers_on_samples_bt(d: &Dataset, ids: &[usize], b: &AxisBox) -> (AxisBox, usize) {
    let m = membership_scan(d, ids, core::slice::from_ref(b), &[], 0.0);
    let m = m.into_iter().next().expect("one box");
    (m.bbox, m.count)
}

/// Enforces `mu_1^1 <= mu_1^2 <= ... <= mu_1^K` on the first attribute.
pub fn symmetry_break(m: &CenterRegion) -> CenterRegion {
    let mut out = m.clone();
    let k = out.k();
    for c in 1..k {
        let prev = out.boxes[c - 1].lo[0];
        if prev > out.boxes[c].lo[0] {
            out.boxes[c].lo[0] = prev;
        }
    }
    for c in (0..k.saturating_sub(1)).rev() {
        let next = out.boxes[c + 1].hi[0];
        if next < out.boxes[c].hi[0] {
            out.boxes[c].hi[0] = next;
        }
    }
    for b in &mut out.boxes {
        if b.is_empty() {
            *b = AxisBox::empty(b.dim());
        }
    }
    out
}

pub fn tighten_node(
    d: &Dataset,
    ids: &[usize],
    m: &CenterRegion,
    st: &AssignmentState,
    alpha: f64,
    cfg: &TightenConfig,
) -> TightenOutcome {
    tighten_node_with(&Serial, d, ids, m, st, alpha, cfg)
}

/// Assigned samples per cluster (box rule), followed by the symmetry chain,
/// then one sweep that applies the balls and the centers-on-samples rule.
pub fn tighten_node_with<E: Executor>(
    exec: &E,
    d: &Dataset,
    ids: &[usize],
    m: &CenterRegion,
    st: &AssignmentState,
    alpha: f64,
    cfg: &TightenConfig,
) -> TightenOutcome {
    let k = m.k();
    let mut region = m.clone();
    let mut balls: Vec<Vec<usize>> = Vec::new();
    if cfg.bounds_tightening {
        balls = vec![Vec::new(); k];
        let mut assigned: Vec<Vec<usize>> = vec![Vec::new(); k];
        for &s in ids {
            if let Some(c) = st.cluster_of(s) {
                assigned[c].push(s);
            }
        }
        for (c, members) in assigned.iter().enumerate() {
            if members.len() > cfg.ball_threshold {
                let pts: Vec<&[f64]> = members.iter().map(|&s| d.row(s)).collect();
                region.boxes[c] = box_bt(&region.boxes[c], &pts, alpha);
            }
            balls[c] = members[..members.len().min(cfg.ball_threshold)].to_vec();
        }
    }
    if cfg.symmetry {
        region = symmetry_break(&region);
    }
    let mem = membership(exec, d, ids, &region.boxes, &balls, alpha);
    let infeasible = mem.iter().any(|x| x.count == 0);
    if cfg.bounds_tightening {
        for (b, x) in region.boxes.iter_mut().zip(&mem) {
            *b = x.bbox.clone();
        }
    }
    TightenOutcome {
        region,
        counts: mem.iter().map(|x| x.count).collect(),
        occupied: mem.iter().map(|x| x.bbox.clone()).collect(),
        first: mem.iter().map(|x| x.first).collect(),
        infeasible,
    }
}
