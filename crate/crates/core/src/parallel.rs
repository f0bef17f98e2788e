//! Static sample partitioning.
//!
//! Per-sample work inside a node is split into contiguous chunks of the
//! active index list. Each chunk produces a partial result; partials are then
//! merged in chunk order with exact reductions (max, min, or, and, or argmin
//! with lowest-index ties), so the outcome does not depend on how many
//! chunks were used.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

pub trait Executor: Sync {
    /// Number of partitions used for a sweep.
    fn workers(&self) -> usize;

    /// Applies `f` to consecutive sub-ranges covering `0..len` and returns the
    /// results in range order.
    fn map_partitions<R, F>(&self, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(Range<usize>) -> R + Sync;
}

/// Runs everything on the calling thread as a single partition.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn workers(&self) -> usize {
        1
    }

    fn map_partitions<R, F>(&self, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(Range<usize>) -> R + Sync,
    {
        vec![f(0..len)]
    }
}

/// Splits `0..len` into `parts` contiguous ranges whose sizes differ by at most one.
pub fn partition(len: usize, parts: usize) -> Vec<Range<usize>> {
    let parts = parts.max(1);
    let base = len / parts;
    let extra = len % parts;
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for p in 0..parts {
        let n = base + usize::from(p < extra);
        out.push(start..start + n);
        start += n;
    }
    out
}

/// Runs each partition sequentially on the calling thread. Used to check that
/// results are independent of the partition count.
#[derive(Debug, Clone, Copy)]
pub struct Chunked(pub usize);

impl Executor for Chunked {
    fn workers(&self) -> usize {
        self.0.max(1)
    }

    fn map_partitions<R, F>(&self, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(Range<usize>) -> R + Sync,
    {
        partition(len, self.workers()).into_iter().map(f).collect()
    }
}
