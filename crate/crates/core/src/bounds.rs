//! Closed-form distance kernels and node bounds.
//!
//! For a box `[lo, hi]` the closest point to `x` is the per-attribute clamp
//! `mid{lo_a, x_a, hi_a}` and the farthest point is the corner that picks,
//! per attribute, whichever of `lo_a`, `hi_a` is farther from `x_a`.

use alloc::vec::Vec;

use crate::dataset::{sqdist, AxisBox, CenterRegion, Dataset};
use crate::{Error, Result};

#[inline]
pub(crate) fn min_sqdist(x: &[f64], b: &AxisBox) -> f64 {
    let mut acc = 0.0;
    for ((&v, &lo), &hi) in x.iter().zip(&b.lo).zip(&b.hi) {
        let c = if v < lo {
            lo
        } else if v > hi {
            hi
        } else {
            v
        };
        let t = v - c;
        acc += t * t;
    }
    acc
}

#[inline]
pub(crate) fn max_sqdist(x: &[f64], b: &AxisBox) -> f64 {
    let mut acc = 0.0;
    for ((&v, &lo), &hi) in x.iter().zip(&b.lo).zip(&b.hi) {
        let c = if (lo - v).abs() > (hi - v).abs() { lo } else { hi };
        let t = v - c;
        acc += t * t;
    }
    acc
}

/// `min_k min_{mu in M^k} ||x - mu||^2`, the per-sample lower bound.
#[inline]
pub(crate) fn sample_lb(x: &[f64], m: &CenterRegion) -> f64 {
    let mut best = f64::INFINITY;
    for b in &m.boxes {
        let v = min_sqdist(x, b);
        if v < best {
            best = v;
        }
    }
    best
}

/// `min_k max_{mu in M^k} ||x - mu||^2`, the best worst-case distance.
#[inline]
pub(crate) fn sample_best_max(x: &[f64], m: &CenterRegion) -> f64 {
    let mut best = f64::INFINITY;
    for b in &m.boxes {
        let v = max_sqdist(x, b);
        if v < best {
            best = v;
        }
    }
    best
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// Squared distance from `x` to the nearest point of `b`.
pub fn min_sqdist_to_box(x: &[f64], b: &AxisBox) -> Result<f64> {
    check_dim(b.dim(), x.len())?;
    Ok(min_sqdist(x, b))
}

/// Squared distance from `x` to the farthest corner of `b`.
pub fn max_sqdist_to_box(x: &[f64], b: &AxisBox) -> Result<f64> {
    check_dim(b.dim(), x.len())?;
    Ok(max_sqdist(x, b))
}

pub fn sample_lower_bound(x: &[f64], m: &CenterRegion) -> Result<f64> {
    check_dim(m.dim(), x.len())?;
    Ok(sample_lb(x, m))
}

/// Max over `ids` of the per-sample lower bound; 0 for an empty slice.
pub fn partial_lower_bound(d: &Dataset, m: &CenterRegion, ids: &[usize]) -> f64 {
    let mut best = 0.0f64;
    for &s in ids {
        let v = sample_lb(d.row(s), m);
        if v > best {
            best = v;
        }
    }
    best
}

/// Lower bound of a node: `max_{s in active} min_k beta_s^k`.
pub fn node_lower_bound(d: &Dataset, m: &CenterRegion, active: &[usize]) -> Result<f64> {
    if active.is_empty() {
        return Err(Error::EmptyActiveSet);
    }
    check_dim(m.dim(), d.n_attrs())?;
    Ok(partial_lower_bound(d, m, active))
}

/// Max over `ids` of the distance to the nearest of `centers`.
pub fn partial_objective<C: AsRef<[f64]>>(d: &Dataset, centers: &[C], ids: &[usize]) -> f64 {
    let mut worst = 0.0f64;
    for &s in ids {
        let x = d.row(s);
        let mut near = f64::INFINITY;
        for c in centers {
            let v = sqdist(x, c.as_ref());
            if v < near {
                near = v;
            }
        }
        if near > worst {
            worst = near;
        }
    }
    worst
}

/// K-center objective `max_s min_k ||x_s - c^k||^2` over all samples.
pub fn evaluate_assignment<C: AsRef<[f64]>>(d: &Dataset, centers: &[C]) -> Result<f64> {
    if centers.is_empty() {
        return Err(Error::InvalidK {
            k: 0,
            n: d.n_samples(),
        });
    }
    for c in centers {
        check_dim(d.n_attrs(), c.as_ref().len())?;
    }
    let ids: Vec<usize> = (0..d.n_samples()).collect();
    Ok(partial_objective(d, centers, &ids))
}

/// Objective of a tuple of sample indices used as centers.
pub fn evaluate_indices(d: &Dataset, centers: &[usize], ids: &[usize]) -> f64 {
    let rows: Vec<&[f64]> = centers.iter().map(|&c| d.row(c)).collect();
    partial_objective(d, &rows, ids)
}

/// Per-cluster nearest-to-midpoint sample among `ids`, as `(distance, index)`.
pub type Candidate = Option<(f64, usize)>;

pub(crate) fn partial_candidates(
    d: &Dataset,
    m: &CenterRegion,
    mids: &[Vec<f64>],
    ids: &[usize],
) -> Vec<Candidate> {
    let mut best: Vec<Candidate> = alloc::vec![None; m.k()];
    for &s in ids {
        let x = d.row(s);
        for (k, b) in m.boxes.iter().enumerate() {
            if !b.contains(x) {
                continue;
            }
            let v = sqdist(x, &mids[k]);
            if best[k].is_none_or(|(bv, _)| v < bv) {
                best[k] = Some((v, s));
            }
        }
    }
    best
}

/// Merges per-partition candidates; partitions must be in index order.
pub(crate) fn merge_candidates(acc: &mut [Candidate], part: &[Candidate]) {
    for (a, p) in acc.iter_mut().zip(part) {
        if let Some((pv, ps)) = *p {
            match *a {
                Some((av, as_)) if av < pv || (av == pv && as_ < ps) => {}
                _ => *a = Some((pv, ps)),
            }
        }
    }
}

/// For each cluster, the sample in `X ∩ M^k` nearest to the box midpoint
/// (lowest index on ties). Fails when some box holds no sample.
pub fn candidate_centers(d: &Dataset, m: &CenterRegion) -> Result<Vec<usize>> {
    check_dim(m.dim(), d.n_attrs())?;
    let ids: Vec<usize> = (0..d.n_samples()).collect();
    candidates_among(d, m, &ids)
}

pub(crate) fn candidates_among(d: &Dataset, m: &CenterRegion, ids: &[usize]) -> Result<Vec<usize>> {
    let mids: Vec<Vec<f64>> = m.boxes.iter().map(AxisBox::midpoint).collect();
    let best = partial_candidates(d, m, &mids, ids);
    best.iter()
        .enumerate()
        .map(|(k, c)| c.map(|(_, s)| s).ok_or(Error::EmptyIntersection { cluster: k }))
        .collect()
}
