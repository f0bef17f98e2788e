//! Thread-pool executor and wall clock.

use std::ops::Range;
use std::time::Instant;

use kcenter_core::parallel::partition;
use kcenter_core::{Clock, Executor};
use rayon::prelude::*;

/// Splits each sweep into `workers` contiguous partitions run on a
/// dedicated rayon pool.
pub struct ThreadPoolExecutor {
    pool: rayon::ThreadPool,
    workers: usize,
}

impl ThreadPoolExecutor {
    pub fn new(workers: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let workers = workers.max(1);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
        Ok(Self { pool, workers })
    }
}

impl Executor for ThreadPoolExecutor {
    fn workers(&self) -> usize {
        self.workers
    }

    fn map_partitions<R, F>(&self, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(Range<usize>) -> R + Sync,
    {
        if self.workers == 1 {
            return vec![f(0..len)];
        }
        let parts = partition(len, self.workers);
        self.pool.install(|| parts.into_par_iter().map(&f).collect())
    }
}

pub struct WallClock(Instant);

impl WallClock {
    pub fn start() -> Self {
        Self(Instant::now())
    }
}

impl Clock for WallClock {
    fn elapsed(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}
