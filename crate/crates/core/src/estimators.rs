//! Degree-distribution estimates from a single patch.
//!
//! Seed degrees are an unbiased sample of the degree distribution. Non-seeds
//! enter a snowball with probability proportional to their degree, so each
//! non-seed of degree `k` is down-weighted by `1/k` and scaled by the seed mean
//! degree before being pooled with the seeds.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lsmi::Patch;

/// Point estimates for one patch, together with the degree counts the
/// bootstrap resamples from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeDistributionEstimate {
    /// `fk[k]` estimates the fraction of vertices with degree `k`.
    pub fk: Vec<f64>,
    pub mu: f64,
    pub p0: f64,
    #[serde(skip)]
    pub mu_s: f64,
    pub n_seed: usize,
    pub n_wave: usize,
    /// `seed_counts[k]` = number of seeds with degree `k`.
    #[serde(skip)]
    pub seed_counts: Vec<usize>,
    /// `nonseed_counts[k]` = number of non-seed inclusions with degree `k`.
    #[serde(skip)]
    pub nonseed_counts: Vec<usize>,
}

impl DegreeDistributionEstimate {
    pub fn max_degree(&self) -> usize {
        self.fk.len() - 1
    }

    pub fn n_seed_degrees(&self) -> usize {
        self.seed_counts.iter().sum()
    }

    pub fn n_nonseed_degrees(&self) -> usize {
        self.nonseed_counts.iter().sum()
    }
}

/// Estimates `f(k)`, the mean degree and `p0` from a patch.
pub fn lsmi_dd(patch: &Patch) -> Result<DegreeDistributionEstimate> {
    let seeds = patch.seed_degrees();
    let nonseeds = patch.nonseed_degrees();
    let mut est = estimate_from_degrees(&seeds, &nonseeds)?;
    est.n_seed = patch.n_seed;
    est.n_wave = patch.n_wave;
    Ok(est)
}

/// Same estimator, starting from the seed and non-seed degree multisets.
pub fn estimate_from_degrees(seeds: &[usize], nonseeds: &[usize]) -> Result<DegreeDistributionEstimate> {
    if seeds.is_empty() {
        return Err(Error::invalid("estimation needs at least one seed"));
    }
    if nonseeds.contains(&0) {
        return Err(Error::invalid("non-seed inclusions cannot have degree 0"));
    }
    let k_max = seeds.iter().chain(nonseeds).copied().max().unwrap_or(0);
    let mut seed_counts = vec![0usize; k_max + 1];
    let mut nonseed_counts = vec![0usize; k_max + 1];
    for &d in seeds {
        seed_counts[d] += 1;
    }
    for &d in nonseeds {
        nonseed_counts[d] += 1;
    }

    let n_s = seeds.len() as f64;
    let p0 = seed_counts[0] as f64 / n_s;
    let mu_s = seeds.iter().sum::<usize>() as f64 / n_s;
    let weighted_nonseeds: f64 = (1..=k_max).map(|k| nonseed_counts[k] as f64 / k as f64).sum();
    let denominator = n_s + mu_s * weighted_nonseeds;

    let mut fk = vec![0.0; k_max + 1];
    fk[0] = p0;
    for k in 1..=k_max {
        let nonseed_part = (1.0 - p0) * mu_s * nonseed_counts[k] as f64 / k as f64;
        fk[k] = (seed_counts[k] as f64 + nonseed_part) / denominator;
    }
    // The positive-degree part sums to 1 - p0 algebraically; pin it against rounding.
    let positive: f64 = fk[1..].iter().sum();
    if positive > 0.0 {
        let scale = (1.0 - p0) / positive;
        fk[1..].iter_mut().for_each(|f| *f *= scale);
    }
    let mu = fk.iter().enumerate().map(|(k, f)| k as f64 * f).sum();
    Ok(DegreeDistributionEstimate { fk, mu, p0, mu_s, n_seed: seeds.len(), n_wave: 0, seed_counts, nonseed_counts })
}

/// Density implied by a mean degree on `n` vertices.
pub fn density_from_mu(mu: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::invalid("density needs at least two vertices"));
    }
    Ok(mu / (n - 1) as f64)
}
