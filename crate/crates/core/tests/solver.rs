mod common;

use std::sync::Arc;

use kcenter_core::assign::{center_based_assign, AssignmentState};
use kcenter_core::bounds::{min_sqdist_to_box, node_lower_bound};
use kcenter_core::oracle::DEFAULT_LIMIT;
use kcenter_core::parallel::Chunked;
use kcenter_core::search::NoClock;
use kcenter_core::tighten::{ball_bt, box_bt, tighten_node, TightenConfig};
use kcenter_core::{
    brute_force, root_region, solve, solve_with, Dataset, SolveReport, SolverConfig,
    TraceRecord,
};
use proptest::prelude::*;

fn exact() -> SolverConfig {
    SolverConfig {
        epsilon_rel: 0.0,
        ..SolverConfig::default()
    }
}

fn toggled(mask: u8) -> SolverConfig {
    SolverConfig {
        bounds_tightening: mask & 1 != 0,
        assignment: mask & 2 != 0,
        reduction: mask & 4 != 0,
        symmetry: mask & 8 != 0,
        ..exact()
    }
}

fn traced(d: &Dataset, k: usize, cfg: &SolverConfig) -> (SolveReport, Vec<TraceRecord>) {
    let mut t = Vec::new();
    let r = solve_with(&Chunked(1), &NoClock, d, k, cfg, &mut |rec| t.push(*rec)).unwrap();
    (r, t)
}

fn check_trace(t: &[TraceRecord], opt: f64) -> Result<(), TestCaseError> {
    for w in t.windows(2) {
        prop_assert!(w[1].alpha <= w[0].alpha);
        prop_assert!(w[1].beta >= w[0].beta);
        prop_assert!(w[1].samples_active <= w[0].samples_active);
    }
    for r in t {
        prop_assert!(r.beta <= opt && opt <= r.alpha);
    }
    Ok(())
}

#[test]
fn exact_solves_match_the_oracle() {
    for seed in 0..100 {
        let (d, k) = common::random_instance(seed);
        let o = brute_force(&d, k, DEFAULT_LIMIT).unwrap();
        let r = solve(&d, k, &exact()).unwrap();
        assert_eq!(r.ub.to_bits(), o.opt_value.to_bits(), "seed {seed}");
        assert_eq!(r.lb.to_bits(), o.opt_value.to_bits(), "seed {seed}");
    }
}

#[test]
fn accelerations_never_change_the_optimum() {
    for seed in 0..40 {
        let (d, k) = common::random_instance(seed);
        let reference = solve(&d, k, &toggled(0)).unwrap().ub;
        for mask in 1..16 {
            let r = solve(&d, k, &toggled(mask)).unwrap();
            assert_eq!(r.ub.to_bits(), reference.to_bits(), "seed {seed} mask {mask}");
        }
    }
}

#[test]
fn partition_count_does_not_matter() {
    for seed in 0..30 {
        let (d, k) = common::random_instance(seed);
        let cfg = SolverConfig {
            i_sr: 1,
            ..exact()
        };
        let one = solve(&d, k, &cfg).unwrap();
        for parts in [2, 3, 7, 64] {
            let r = solve_with(&Chunked(parts), &NoClock, &d, k, &cfg, &mut |_| {}).unwrap();
            assert_eq!(r, one, "seed {seed} parts {parts}");
        }
    }
}

#[test]
fn duplicate_points_terminate() {
    let d = Dataset::from_rows(&[[1.0, 1.0], [1.0, 1.0], [1.0, 1.0], [4.0, 0.0], [4.0, 0.0]]).unwrap();
    for mask in 0..16 {
        let r = solve(&d, 2, &toggled(mask)).unwrap();
        assert_eq!(r.ub, 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn traces_are_monotone_and_bracket_the_optimum((d, k) in common::instance(), mask in 0u8..16, i_sr in 1u64..4) {
        let opt = brute_force(&d, k, DEFAULT_LIMIT).unwrap().opt_value;
        let cfg = SolverConfig { i_sr, ..toggled(mask) };
        let (r, t) = traced(&d, k, &cfg);
        prop_assert_eq!(r.ub, opt);
        check_trace(&t, opt)?;
    }

    #[test]
    fn reduction_is_neutral((d, k) in common::instance()) {
        let on = solve(&d, k, &SolverConfig { i_sr: 1, ..exact() }).unwrap();
        let off = solve(&d, k, &SolverConfig { reduction: false, ..exact() }).unwrap();
        prop_assert_eq!(on.ub, off.ub);
        prop_assert_eq!(on.lb, off.lb);
    }

    #[test]
    fn reports_are_reproducible((d, k) in common::instance(), seed in any::<u64>()) {
        let cfg = SolverConfig { seed, fft_trials: 3, ..SolverConfig::default() };
        prop_assert_eq!(solve(&d, k, &cfg).unwrap(), solve(&d, k, &cfg).unwrap());
    }

    #[test]
    fn oracle_ignores_sample_order((d, k) in common::instance(), rot in 0usize..13) {
        let rows: Vec<Vec<f64>> = d.rows().map(<[f64]>::to_vec).collect();
        let mut shuffled = rows.clone();
        shuffled.rotate_left(rot % rows.len());
        shuffled.reverse();
        let e = Dataset::from_rows(&shuffled).unwrap();
        prop_assert_eq!(
            brute_force(&d, k, DEFAULT_LIMIT).unwrap().opt_value,
            brute_force(&e, k, DEFAULT_LIMIT).unwrap().opt_value
        );
    }

    #[test]
    fn tightening_only_contracts((d, k) in common::instance(), assigned in proptest::collection::vec(any::<prop::sample::Index>(), 0..4), symmetry in any::<bool>()) {
        let all: Vec<usize> = (0..d.n_samples()).collect();
        let alpha = brute_force(&d, k, DEFAULT_LIMIT).unwrap().opt_value * 1.5 + 0.1;
        let mut st = AssignmentState::new(d.n_samples(), k).unwrap();
        for (c, i) in assigned.iter().enumerate().take(k) {
            st.assign(i.index(d.n_samples()), c);
        }
        let m = root_region(&d, k).unwrap();
        let cfg = TightenConfig { symmetry, ..TightenConfig::default() };
        let out = tighten_node(&d, &all, &m, &st, alpha, &cfg);
        if !out.infeasible {
            prop_assert!(out.region.is_subset_of(&m));
        }
    }

    #[test]
    fn balls_fit_inside_boxes((d, _k) in common::instance(), picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..4), alpha in 0.1f64..40.0) {
        let all: Vec<usize> = (0..d.n_samples()).collect();
        let b = d.bounding_box();
        let assigned: Vec<usize> = picks.iter().map(|i| i.index(d.n_samples())).collect();
        let ball = ball_bt(&d, &all, &b, &assigned, alpha, 50);
        let pts: Vec<&[f64]> = assigned.iter().map(|&s| d.row(s)).collect();
        let cube = box_bt(&b, &pts, alpha);
        if !ball.is_empty() {
            prop_assert!(!cube.is_empty());
            prop_assert!(ball.is_subset_of(&cube));
        }
    }

    #[test]
    fn center_rule_is_idempotent((d, k) in common::instance(), alpha in 0.0f64..30.0, split in 0.0f64..1.0) {
        let all: Vec<usize> = (0..d.n_samples()).collect();
        let mut m = root_region(&d, k).unwrap();
        let b = &mut m.boxes[0];
        b.hi[0] = b.lo[0] + (b.hi[0] - b.lo[0]) * split;
        let betas: Vec<f64> = all
            .iter()
            .flat_map(|&s| m.boxes.iter().map(move |b| (s, b)))
            .map(|(s, b)| min_sqdist_to_box(d.row(s), b).unwrap())
            .collect();
        let mut st = AssignmentState::new(d.n_samples(), k).unwrap();
        let first = center_based_assign(&mut st, &all, &betas, alpha);
        let snapshot = st.clone();
        let second = center_based_assign(&mut st, &all, &betas, alpha);
        prop_assert_eq!(&st, &snapshot);
        prop_assert_eq!(second.newly_assigned, 0);
        prop_assert_eq!(first.pruned, second.pruned);
    }

    #[test]
    fn exclusions_only_grow((d, k) in common::instance(), masks in proptest::collection::vec((any::<prop::sample::Index>(), 0u64..8), 1..20)) {
        let mut st = AssignmentState::new(d.n_samples(), k).unwrap();
        for (i, m) in masks {
            let s = i.index(d.n_samples());
            let before = st.excluded(s);
            let parent = Arc::new(st.clone());
            st.exclude(s, m & st.full_mask());
            prop_assert_eq!(st.excluded(s) & before, before);
            prop_assert_eq!(parent.excluded(s), before);
        }
    }

    #[test]
    fn flagged_samples_do_not_move_the_bound((d, k) in common::instance(), split in 0.0f64..1.0) {
        let all: Vec<usize> = (0..d.n_samples()).collect();
        let root = root_region(&d, k).unwrap();
        let beta_best = node_lower_bound(&d, &root, &all).unwrap();
        let mut m = root.clone();
        m.boxes[0].hi[0] = m.boxes[0].lo[0] + (m.boxes[0].hi[0] - m.boxes[0].lo[0]) * split;
        let kept: Vec<usize> = all
            .iter()
            .copied()
            .filter(|&s| !kcenter_core::reduce::lb_redundant(d.row(s), &m, beta_best))
            .collect();
        let full = node_lower_bound(&d, &m, &all).unwrap();
        prop_assert!(full >= beta_best);
        if !kept.is_empty() {
            prop_assert_eq!(node_lower_bound(&d, &m, &kept).unwrap(), full);
        }
    }
}
