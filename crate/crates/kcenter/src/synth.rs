//! Seeded Gaussian mixtures.

use kcenter_core::Dataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::DataError;

/// Cluster means are drawn uniformly from `[0, HYPERCUBE_SIDE]^A`.
pub const HYPERCUBE_SIDE: f64 = 100.0;
pub const CLUSTER_STD: f64 = 1.0;

/// `n` samples from `k` isotropic Gaussians; sample `i` comes from cluster
/// `i % k`. Bitwise reproducible per seed.
pub fn generate_gaussian(n: usize, k: usize, n_attrs: usize, seed: u64) -> Result<Dataset, DataError> {
    if k == 0 || n < k {
        return Err(kcenter_core::Error::InvalidK { k, n }.into());
    }
    if n_attrs == 0 {
        return Err(kcenter_core::Error::ShapeMismatch {
            expected: 1,
            got: 0,
        }
        .into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let means: Vec<f64> = (0..k * n_attrs)
        .map(|_| rng.random_range(0.0..HYPERCUBE_SIDE))
        .collect();
    let mut values = Vec::with_capacity(n * n_attrs);
    for i in 0..n {
        let c = i % k;
        for a in 0..n_attrs {
            let z: f64 = rng.sample(StandardNormal);
            values.push(means[c * n_attrs + a] + CLUSTER_STD * z);
        }
    }
    Ok(Dataset::new(n, n_attrs, values)?)
}

/// Parsed `n=..,k=..,a=..,seed=..`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticSpec {
    pub n: usize,
    pub k: usize,
    pub a: usize,
    pub seed: u64,
}

impl std::str::FromStr for SyntheticSpec {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, DataError> {
        let bad = || DataError::Spec(s.to_string());
        let (mut n, mut k, mut a, mut seed) = (None, None, None, 0);
        for part in s.split(',') {
            let (key, v) = part.split_once('=').ok_or_else(bad)?;
            let v: u64 = v.trim().parse().map_err(|_| bad())?;
            match key.trim() {
                "n" => n = Some(v as usize),
                "k" => k = Some(v as usize),
                "a" => a = Some(v as usize),
                "seed" => seed = v,
                _ => return Err(bad()),
            }
        }
        Ok(Self {
            n: n.ok_or_else(bad)?,
            k: k.ok_or_else(bad)?,
            a: a.ok_or_else(bad)?,
            seed,
        })
    }
}

impl SyntheticSpec {
    pub fn generate(&self) -> Result<Dataset, DataError> {
        generate_gaussian(self.n, self.k, self.a, self.seed)
    }
}
