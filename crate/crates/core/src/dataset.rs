//! Sample matrix, center boxes and the root center region.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Squared Euclidean distance, summed in attribute order.
///
/// Every objective value in the crate goes through this function so that the
/// solver and the brute-force oracle agree bit for bit.
#[inline]
pub fn sqdist(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let t = x - y;
        acc += t * t;
    }
    acc
}

/// Immutable `S x A` matrix of finite samples, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    n_samples: usize,
    n_attrs: usize,
}

impl Dataset {
    pub fn new(n_samples: usize, n_attrs: usize, values: Vec<f64>) -> Result<Self> {
        if n_samples == 0 || n_attrs == 0 {
            return Err(Error::EmptyDataset);
        }
        let expected = n_samples * n_attrs;
        if values.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                got: values.len(),
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                sample: pos / n_attrs,
                attr: pos % n_attrs,
            });
        }
        Ok(Self {
            values,
            n_samples,
            n_attrs,
        })
    }

    /// Builds a dataset from equally sized rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_attrs = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut values = Vec::with_capacity(rows.len() * n_attrs);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n_attrs {
                return Err(Error::DimensionMismatch {
                    expected: n_attrs,
                    got: r.len(),
                });
            }
            values.extend_from_slice(r);
        }
        Self::new(rows.len(), n_attrs, values)
    }

    #[inline]
    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    #[inline]
    pub fn n_attrs(&self) -> usize {
        self.n_attrs
    }

    #[inline]
    pub fn row(&self, s: usize) -> &[f64] {
        &self.values[s * self.n_attrs..(s + 1) * self.n_attrs]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.n_attrs)
    }

    /// Number of pairwise distinct rows.
    pub fn distinct_rows(&self) -> usize {
        let mut idx: Vec<usize> = (0..self.n_samples).collect();
        idx.sort_by(|&a, &b| {
            for (x, y) in self.row(a).iter().zip(self.row(b)) {
                match x.total_cmp(y) {
                    core::cmp::Ordering::Equal => continue,
                    o => return o,
                }
            }
            core::cmp::Ordering::Equal
        });
        let mut n = 1;
        for w in idx.windows(2) {
            if self.row(w[0]) != self.row(w[1]) {
                n += 1;
            }
        }
        n
    }

    /// Per-attribute bounding box of all samples.
    pub fn bounding_box(&self) -> AxisBox {
        let mut b = AxisBox::empty(self.n_attrs);
        for r in self.rows() {
            b.include(r);
        }
        b
    }
}

/// Closed axis-aligned box `[lo, hi]`.
///
/// A box with `lo[0] > hi[0]` is the empty marker; consumers treat it as an
/// infeasible region.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl AxisBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        Ok(Self { lo, hi })
    }

    /// The empty marker of dimension `dim`; also the identity for [`AxisBox::include`].
    pub fn empty(dim: usize) -> Self {
        Self {
            lo: vec![f64::INFINITY; dim],
            hi: vec![f64::NEG_INFINITY; dim],
        }
    }

    pub fn point(x: &[f64]) -> Self {
        Self {
            lo: x.to_vec(),
            hi: x.to_vec(),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    /// True when the box is a single point.
    pub fn is_degenerate(&self) -> bool {
        !self.is_empty() && self.lo == self.hi
    }

    #[inline]
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (l, h))| *l <= *v && *v <= *h)
    }

    /// Grows the box to cover `x`.
    #[inline]
    pub fn include(&mut self, x: &[f64]) {
        for ((l, h), v) in self.lo.iter_mut().zip(self.hi.iter_mut()).zip(x) {
            if *v < *l {
                *l = *v;
            }
            if *v > *h {
                *h = *v;
            }
        }
    }

    /// Smallest box covering both `self` and `other`.
    pub fn merge(&mut self, other: &AxisBox) {
        for a in 0..self.dim() {
            self.lo[a] = self.lo[a].min(other.lo[a]);
            self.hi[a] = self.hi[a].max(other.hi[a]);
        }
    }

    pub fn intersect(&mut self, other: &AxisBox) {
        for a in 0..self.dim() {
            self.lo[a] = self.lo[a].max(other.lo[a]);
            self.hi[a] = self.hi[a].min(other.hi[a]);
        }
    }

    pub fn is_subset_of(&self, other: &AxisBox) -> bool {
        self.is_empty()
            || (0..self.dim()).all(|a| other.lo[a] <= self.lo[a] && self.hi[a] <= other.hi[a])
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| l + (h - l) * 0.5)
            .collect()
    }

    pub fn range(&self, a: usize) -> f64 {
        self.hi[a] - self.lo[a]
    }
}

/// One box per cluster center.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterRegion {
    pub boxes: Vec<AxisBox>,
}

impl CenterRegion {
    pub fn new(boxes: Vec<AxisBox>) -> Result<Self> {
        let Some(first) = boxes.first() else {
            return Err(Error::InvalidK { k: 0, n: 0 });
        };
        let dim = first.dim();
        if let Some(b) = boxes.iter().find(|b| b.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: b.dim(),
            });
        }
        Ok(Self { boxes })
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.boxes.len()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.boxes[0].dim()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.iter().any(AxisBox::is_empty)
    }

    pub fn is_subset_of(&self, other: &CenterRegion) -> bool {
        self.boxes
            .iter()
            .zip(&other.boxes)
            .all(|(a, b)| a.is_subset_of(b))
    }

    /// Region whose boxes are the given points.
    pub fn from_points<R: AsRef<[f64]>>(points: &[R]) -> Result<Self> {
        Self::new(points.iter().map(|p| AxisBox::point(p.as_ref())).collect())
    }
}

/// Root region: every cluster box is the bounding box of the data.
pub fn root_region(d: &Dataset, k: usize) -> Result<CenterRegion> {
    if k == 0 {
        return Err(Error::InvalidK {
            k,
            n: d.n_samples(),
        });
    }
    Ok(CenterRegion {
        boxes: vec![d.bounding_box(); k],
    })
}
