//! Best-bound branch and bound over the center boxes.
//!
//! Each iteration takes the open node with the smallest lower bound, narrows
//! it (cluster assignment, then bounds tightening), fathoms it when every
//! cluster is down to a single candidate point, and otherwise splits the
//! widest center coordinate at its midpoint. Children are bounded on
//! creation: the closed-form lower bound and the objective of the samples
//! nearest to their box midpoints.

use alloc::collections::BinaryHeap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::assign::{
    apply_pair_exclusions, center_mask, scan_representatives, seeds_valid, AssignmentState,
    RepDistances, MAX_CLUSTERS,
};
use crate::bounds::{
    merge_candidates, partial_candidates, partial_objective, sample_best_max, sample_lb, Candidate,
};
use crate::dataset::{root_region, AxisBox, CenterRegion, Dataset};
use crate::heuristic::{fft, fft_multistart, CenterSet};
use crate::parallel::{Executor, Serial};
use crate::reduce::{sample_reduction, ub_redundant_masked, RedundancyFlags, WorkingSet};
use crate::tighten::{tighten_node_with, TightenConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Stop once `(UB - LB) / UB` is at most this.
    pub epsilon_rel: f64,
    /// Wall-clock budget in seconds.
    pub time_limit: Option<f64>,
    /// Sample reduction runs every `i_sr` iterations.
    pub i_sr: u64,
    pub ball_threshold: usize,
    /// Representatives per cluster for sample-based assignment.
    pub rep_cap: usize,
    /// Traversal restarts for the root upper bound.
    pub fft_trials: usize,
    pub seed: u64,
    /// Partitions for per-sample sweeps (informational for the core; the
    /// executor decides).
    pub workers: usize,
    pub bounds_tightening: bool,
    pub assignment: bool,
    pub reduction: bool,
    /// Allow symmetry breaking when no initial seeds are found.
    pub symmetry: bool,
    pub max_open_nodes: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            epsilon_rel: 1e-3,
            time_limit: None,
            i_sr: 10,
            ball_threshold: 50,
            rep_cap: 10,
            fft_trials: 1,
            seed: 0,
            workers: 1,
            bounds_tightening: true,
            assignment: true,
            reduction: true,
            symmetry: true,
            max_open_nodes: 10_000_000,
        }
    }
}

impl SolverConfig {
    /// Bare branch and bound with closed-form bounds, no accelerations.
    pub fn plain() -> Self {
        Self {
            bounds_tightening: false,
            assignment: false,
            reduction: false,
            symmetry: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon_rel.is_nan() || self.epsilon_rel < 0.0 {
            return Err(Error::InvalidConfig("epsilon_rel must be >= 0"));
        }
        if self.time_limit.is_some_and(|t| t.is_nan() || t < 0.0) {
            return Err(Error::InvalidConfig("time_limit must be >= 0"));
        }
        if self.i_sr == 0 {
            return Err(Error::InvalidConfig("i_sr must be >= 1"));
        }
        if self.rep_cap == 0 {
            return Err(Error::InvalidConfig("rep_cap must be >= 1"));
        }
        if self.fft_trials == 0 {
            return Err(Error::InvalidConfig("fft_trials must be >= 1"));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be >= 1"));
        }
        if self.max_open_nodes == 0 {
            return Err(Error::InvalidConfig("max_open_nodes must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Gap,
    QueueEmpty,
    TimeLimit,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Gap => "gap",
            Termination::QueueEmpty => "queue-empty",
            Termination::TimeLimit => "time-limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub ub: f64,
    pub lb: f64,
    pub gap_pct: f64,
    pub incumbent: CenterSet,
    pub nodes: u64,
    pub wall_time: f64,
    pub termination: Termination,
    /// Upper bound from the root traversal.
    pub root_ub: f64,
    /// Initial seeds when found (seed `i` is fixed to cluster `i`).
    pub seeds: Option<CenterSet>,
    pub symmetry_used: bool,
    /// `(iteration, sample)` for every sample dropped by reduction.
    pub removed: Vec<(u64, usize)>,
}

/// One line of the per-iteration trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iteration: u64,
    pub beta: f64,
    pub alpha: f64,
    pub open_nodes: usize,
    pub samples_active: usize,
}

/// Elapsed wall time in seconds since the solve started.
pub trait Clock {
    fn elapsed(&self) -> f64;
}

/// A clock that never advances; time limits never fire.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed(&self) -> f64 {
        0.0
    }
}

/// Relative gap in percent; zero when the upper bound is zero.
pub fn gap_pct(ub: f64, lb: f64) -> f64 {
    if ub > 0.0 {
        100.0 * (ub - lb) / ub
    } else {
        0.0
    }
}

#[derive(Debug, Clone)]
pub struct Node {
    pub region: CenterRegion,
    pub lb: f64,
    pub st: Arc<AssignmentState>,
    pub flags: Arc<RedundancyFlags>,
    pub depth: u32,
    pub id: u64,
}

struct Entry(Node);

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // BinaryHeap is a max-heap: invert so the smallest (lb, id) is on top.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .lb
            .total_cmp(&self.0.lb)
            .then_with(|| other.0.id.cmp(&self.0.id))
    }
}

/// Open nodes keyed by `(lb, id)`.
#[derive(Default)]
pub struct NodeQueue {
    heap: BinaryHeap<Entry>,
}

impl NodeQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, n: Node) {
        self.heap.push(Entry(n));
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn min_lb(&self) -> Option<f64> {
        self.heap.peek().map(|e| e.0.lb)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Node> {
        self.heap.iter().map(|e| &e.0)
    }

    /// Drops every node with `lb >= alpha`.
    pub fn prune(&mut self, alpha: f64) {
        self.heap.retain(|e| e.0.lb < alpha);
    }
}

/// Removes and returns the node with the smallest bound (lowest id on ties).
pub fn select_node(q: &mut NodeQueue) -> Result<Node> {
    q.heap.pop().map(|e| e.0).ok_or(Error::EmptyQueue)
}

/// Splits the widest of the `K x A` center coordinates at its midpoint.
/// Ties go to the lowest `(cluster, attribute)`.
pub fn branch(m: &CenterRegion) -> Result<(CenterRegion, CenterRegion)> {
    let mut best = (0usize, 0usize);
    let mut width = 0.0f64;
    for (k, b) in m.boxes.iter().enumerate() {
        for a in 0..b.dim() {
            let r = b.range(a);
            if r > width {
                width = r;
                best = (k, a);
            }
        }
    }
    if width <= 0.0 {
        return Err(Error::TerminalNode);
    }
    let (k, a) = best;
    let (lo, hi) = (m.boxes[k].lo[a], m.boxes[k].hi[a]);
    let mid = lo + (hi - lo) * 0.5;
    let mut left = m.clone();
    let mut right = m.clone();
    if mid <= lo || mid >= hi {
        // adjacent floats: nothing lies strictly between
        left.boxes[k].hi[a] = lo;
        right.boxes[k].lo[a] = hi;
    } else {
        left.boxes[k].hi[a] = mid;
        right.boxes[k].lo[a] = mid;
    }
    Ok((left, right))
}

/// Best known feasible solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Incumbent {
    pub value: f64,
    pub centers: Vec<usize>,
}

impl Incumbent {
    /// Takes `(centers, value)` when it strictly improves.
    pub fn offer(&mut self, centers: &[usize], value: f64) -> bool {
        if value < self.value {
            self.value = value;
            self.centers = centers.to_vec();
            true
        } else {
            false
        }
    }
}

/// A freshly bounded child region.
#[derive(Debug, Clone, PartialEq)]
pub struct ChildBound {
    pub region: CenterRegion,
    pub lb: f64,
    /// `None` when some cluster box holds no working sample.
    pub candidate: Option<(Vec<usize>, f64)>,
}

/// Updates the incumbent from every child's candidate, then keeps the
/// feasible children whose bound is strictly below it.
pub fn node_bound_and_prune(children: Vec<ChildBound>, inc: &mut Incumbent) -> Vec<ChildBound> {
    for c in &children {
        if let Some((centers, v)) = &c.candidate {
            inc.offer(centers, *v);
        }
    }
    children
        .into_iter()
        .filter(|c| c.candidate.is_some() && c.lb < inc.value)
        .collect()
}

/// Serial solve without time limit or trace.
pub fn solve(d: &Dataset, k: usize, cfg: &SolverConfig) -> Result<SolveReport> {
    solve_with(&Serial, &NoClock, d, k, cfg, &mut |_| {})
}

pub fn solve_with<E: Executor, C: Clock + ?Sized>(
    exec: &E,
    clock: &C,
    d: &Dataset,
    k: usize,
    cfg: &SolverConfig,
    trace: &mut dyn FnMut(&TraceRecord),
) -> Result<SolveReport> {
    cfg.validate()?;
    let n = d.n_samples();
    if k == 0 || k > d.distinct_rows() {
        return Err(Error::InvalidK { k, n });
    }
    if k > MAX_CLUSTERS {
        return Err(Error::TooManyClusters {
            k,
            max: MAX_CLUSTERS,
        });
    }
    let mut s = Search::new(exec, d, k, cfg)?;
    s.run(clock, trace)
}

struct Search<'a, E> {
    exec: &'a E,
    d: &'a Dataset,
    cfg: &'a SolverConfig,
    tcfg: TightenConfig,
    working: WorkingSet,
    queue: NodeQueue,
    inc: Incumbent,
    root_ub: f64,
    seeds: Option<CenterSet>,
    iteration: u64,
    next_id: u64,
}

/// Per-partition output of the child bounding sweep.
struct ChildSweep {
    lb: f64,
    counts: Vec<usize>,
    cand: Vec<Candidate>,
}

impl<'a, E: Executor> Search<'a, E> {
    fn new(exec: &'a E, d: &'a Dataset, k: usize, cfg: &'a SolverConfig) -> Result<Self> {
        let n = d.n_samples();
        let region = root_region(d, k)?;
        let (fft_set, root_ub) = fft_multistart(d, k, cfg.fft_trials, cfg.seed)?;
        let mut st = AssignmentState::new(n, k)?;
        let mut seeds = None;
        if cfg.assignment {
            seeds = if seeds_valid(d, &fft_set, root_ub) {
                Some(fft_set.clone())
            } else {
                fft(d, k, 0)
                    .ok()
                    .filter(|c| seeds_valid(d, c, root_ub))
            };
            if let Some(c) = &seeds {
                for (cluster, &s) in c.indices().iter().enumerate() {
                    st.assign(s, cluster);
                }
            }
        }
        let tcfg = TightenConfig {
            ball_threshold: cfg.ball_threshold,
            bounds_tightening: cfg.bounds_tightening,
            symmetry: cfg.symmetry && seeds.is_none(),
        };
        let working = WorkingSet::full(n);
        let root_lb = exec
            .map_partitions(n, |r| {
                let mut m = 0.0f64;
                for s in r {
                    m = m.max(sample_lb(d.row(s), &region));
                }
                m
            })
            .into_iter()
            .fold(0.0, f64::max);
        let mut queue = NodeQueue::new();
        queue.push(Node {
            region,
            lb: root_lb,
            st: Arc::new(st),
            flags: Arc::new(RedundancyFlags::new(n)),
            depth: 0,
            id: 0,
        });
        Ok(Self {
            exec,
            d,
            cfg,
            tcfg,
            working,
            queue,
            inc: Incumbent {
                value: root_ub,
                centers: fft_set.0,
            },
            root_ub,
            seeds,
            iteration: 0,
            next_id: 1,
        })
    }

    fn beta(&self) -> f64 {
        match self.queue.min_lb() {
            Some(q) if q < self.inc.value => q,
            _ => self.inc.value,
        }
    }

    fn record(&self, trace: &mut dyn FnMut(&TraceRecord)) {
        trace(&TraceRecord {
            iteration: self.iteration,
            beta: self.beta(),
            alpha: self.inc.value,
            open_nodes: self.queue.len(),
            samples_active: self.working.alive().len(),
        });
    }

    fn gap_met(&self) -> bool {
        let a = self.inc.value;
        let b = self.beta();
        if a > 0.0 {
            (a - b) / a <= self.cfg.epsilon_rel
        } else {
            true
        }
    }

    fn run<C: Clock + ?Sized>(
        &mut self,
        clock: &C,
        trace: &mut dyn FnMut(&TraceRecord),
    ) -> Result<SolveReport> {
        self.queue.prune(self.inc.value);
        self.record(trace);
        let termination = loop {
            if self.queue.is_empty() {
                break Termination::QueueEmpty;
            }
            if self.gap_met() {
                break Termination::Gap;
            }
            if self.cfg.time_limit.is_some_and(|t| clock.elapsed() >= t) {
                break Termination::TimeLimit;
            }
            let node = select_node(&mut self.queue)?;
            if node.lb >= self.inc.value {
                continue;
            }
            self.iteration += 1;
            self.process(node)?;
            if self.queue.len() > self.cfg.max_open_nodes {
                return Err(Error::NodeLimit(self.cfg.max_open_nodes));
            }
            self.record(trace);
        };
        let ub = self.inc.value;
        let lb = self.beta();
        let mut incumbent = self.inc.centers.clone();
        incumbent.sort_unstable();
        Ok(SolveReport {
            ub,
            lb,
            gap_pct: gap_pct(ub, lb),
            incumbent: CenterSet(incumbent),
            nodes: self.iteration,
            wall_time: clock.elapsed(),
            termination,
            root_ub: self.root_ub,
            seeds: self.seeds.clone(),
            symmetry_used: self.tcfg.symmetry,
            removed: self.working.removed().to_vec(),
        })
    }

    fn objective(&self, centers: &[usize], ids: &[usize]) -> f64 {
        let d = self.d;
        let rows: Vec<&[f64]> = centers.iter().map(|&c| d.row(c)).collect();
        self.exec
            .map_partitions(ids.len(), |r| partial_objective(d, &rows, &ids[r]))
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// Center-based rule over all working samples. Returns false when the
    /// node holds no solution within the incumbent.
    fn center_assign(&self, st: &mut Arc<AssignmentState>, region: &CenterRegion, ids: &[usize]) -> bool {
        let d = self.d;
        let alpha = self.inc.value;
        let cur: &AssignmentState = st;
        let parts = self.exec.map_partitions(ids.len(), |r| {
            let mut updates = Vec::new();
            let mut betas = vec![0.0; region.k()];
            for &s in &ids[r] {
                let x = d.row(s);
                for (b, bx) in betas.iter_mut().zip(&region.boxes) {
                    *b = crate::bounds::min_sqdist(x, bx);
                }
                let mask = center_mask(&betas, alpha);
                let fresh = match cur.cluster_of(s) {
                    Some(c) => mask & (1u64 << c),
                    None => mask & !cur.excluded(s),
                };
                if fresh != 0 {
                    updates.push((s, mask));
                }
            }
            updates
        });
        if parts.iter().all(Vec::is_empty) {
            return true;
        }
        let st = Arc::make_mut(st);
        let mut ok = true;
        for (s, mask) in parts.into_iter().flatten() {
            if st.exclude(s, mask) == crate::assign::SampleUpdate::Conflict {
                ok = false;
            }
        }
        ok
    }

    /// Sample-based rule. Returns the representative scan (for upper-bound
    /// redundancy) and false when the node is infeasible.
    fn sample_assign(
        &self,
        st: &mut Arc<AssignmentState>,
        ids: &[usize],
    ) -> (Option<Vec<RepDistances>>, bool) {
        let Some(reps) = st.representatives(ids, self.cfg.rep_cap) else {
            return (None, true);
        };
        let d = self.d;
        let alpha = self.inc.value;
        let scan: Vec<RepDistances> = self
            .exec
            .map_partitions(ids.len(), |r| scan_representatives(d, &reps, &ids[r], alpha))
            .into_iter()
            .flatten()
            .collect();
        let cur: &AssignmentState = st;
        let changes = ids.iter().zip(&scan).any(|(&s, r)| match cur.cluster_of(s) {
            Some(c) => r.pair_far & (1u64 << c) != 0,
            None => r.pair_far & !cur.excluded(s) != 0,
        });
        if !changes {
            return (Some(scan), true);
        }
        let out = apply_pair_exclusions(Arc::make_mut(st), ids, &scan);
        (Some(scan), !out.pruned)
    }

    fn process(&mut self, node: Node) -> Result<()> {
        let d = self.d;
        let k = node.region.k();
        let mut ids: Vec<usize> = self.working.alive().to_vec();
        let mut st = node.st;
        let mut scan = None;

        if self.cfg.assignment && node.depth > 0 {
            if !self.center_assign(&mut st, &node.region, &ids) {
                return Ok(());
            }
            let (sc, ok) = self.sample_assign(&mut st, &ids);
            if !ok {
                return Ok(());
            }
            scan = sc;
        }

        let alpha = self.inc.value;
        let out = tighten_node_with(self.exec, d, &ids, &node.region, &st, alpha, &self.tcfg);
        if out.infeasible {
            return Ok(());
        }
        if out.is_terminal() {
            let centers: Vec<usize> = out.first.iter().map(|f| f.expect("occupied")).collect();
            let v = self.objective(&centers, &ids);
            if self.inc.offer(&centers, v) {
                self.queue.prune(v);
            }
            return Ok(());
        }
        let region = out.region;

        // Refresh the bound on the tightened region and extend the flags.
        let beta_best = node.lb;
        let reduce = self.cfg.reduction;
        let flags_in: &RedundancyFlags = &node.flags;
        let region_ref = &region;
        let scan_ref = scan.as_deref();
        let ids_ref = &ids;
        let parts = self.exec.map_partitions(ids.len(), |r| {
            let mut lb = 0.0f64;
            let mut lb_new = Vec::new();
            let mut ub_new = Vec::new();
            for i in r {
                let s = ids_ref[i];
                let x = d.row(s);
                if !flags_in.lb[s] {
                    lb = lb.max(sample_lb(x, region_ref));
                    if reduce && sample_best_max(x, region_ref) < beta_best {
                        lb_new.push(s);
                    }
                }
                if reduce && !flags_in.ub[s] {
                    let far = scan_ref.map_or(0, |sc| sc[i].center_far);
                    if ub_redundant_masked(x, region_ref, far) {
                        ub_new.push(s);
                    }
                }
            }
            (lb, lb_new, ub_new)
        });
        let mut node_lb = node.lb;
        let mut flags = node.flags;
        let mut lb_new = Vec::new();
        let mut ub_new = Vec::new();
        for (lb, l, u) in parts {
            node_lb = node_lb.max(lb);
            lb_new.extend(l);
            ub_new.extend(u);
        }
        if node_lb >= self.inc.value {
            return Ok(());
        }
        if !lb_new.is_empty() || !ub_new.is_empty() {
            let f = Arc::make_mut(&mut flags);
            for s in lb_new {
                f.lb[s] = true;
            }
            for s in ub_new {
                f.ub[s] = true;
            }
        }

        if reduce && self.iteration.is_multiple_of(self.cfg.i_sr) {
            let nodes = core::iter::once(&*flags).chain(self.queue.iter().map(|n| &*n.flags));
            let gone = sample_reduction(nodes, &ids);
            if !gone.is_empty() && gone.len() < ids.len() {
                self.working.remove(&gone, self.iteration);
                ids = self.working.alive().to_vec();
            }
        }

        let (left, right) = branch(&region)?;
        let mut children = Vec::with_capacity(2);
        for child in [left, right] {
            children.push(self.bound_child(child, node_lb, &flags, &ids));
        }
        let before = self.inc.value;
        let survivors = node_bound_and_prune(children, &mut self.inc);
        if self.inc.value < before {
            self.queue.prune(self.inc.value);
        }
        for c in survivors {
            let id = self.next_id;
            self.next_id += 1;
            self.queue.push(Node {
                region: c.region,
                lb: c.lb,
                st: Arc::clone(&st),
                flags: Arc::clone(&flags),
                depth: node.depth + 1,
                id,
            });
        }
        debug_assert!(k == st.k());
        Ok(())
    }

    fn bound_child(
        &self,
        region: CenterRegion,
        parent_lb: f64,
        flags: &RedundancyFlags,
        ids: &[usize],
    ) -> ChildBound {
        let d = self.d;
        let k = region.k();
        let mids: Vec<Vec<f64>> = region.boxes.iter().map(AxisBox::midpoint).collect();
        let region_ref = &region;
        let parts = self.exec.map_partitions(ids.len(), |r| {
            let part = &ids[r];
            let mut lb = 0.0f64;
            let mut counts = vec![0usize; k];
            for &s in part {
                let x = d.row(s);
                for (c, b) in region_ref.boxes.iter().enumerate() {
                    if b.contains(x) {
                        counts[c] += 1;
                    }
                }
                if !flags.lb[s] {
                    lb = lb.max(sample_lb(x, region_ref));
                }
            }
            ChildSweep {
                lb,
                counts,
                cand: partial_candidates(d, region_ref, &mids, part),
            }
        });
        let mut lb = parent_lb;
        let mut counts = vec![0usize; k];
        let mut cand: Vec<Candidate> = vec![None; k];
        for p in &parts {
            lb = lb.max(p.lb);
            for (a, b) in counts.iter_mut().zip(&p.counts) {
                *a += b;
            }
            merge_candidates(&mut cand, &p.cand);
        }
        let candidate = if counts.iter().all(|&c| c > 0) {
            let centers: Vec<usize> = cand.iter().map(|c| c.expect("occupied").1).collect();
            let v = self.objective(&centers, ids);
            Some((centers, v))
        } else {
            None
        };
        ChildBound {
            region,
            lb,
            candidate,
        }
    }
}
