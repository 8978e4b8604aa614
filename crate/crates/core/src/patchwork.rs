//! Weighted bootstrap of patch degree data.
//!
//! Each replicate redraws as many seed degrees as the patch has seeds,
//! uniformly with replacement, and as many non-seed degrees as it has
//! non-seed inclusions, with replacement and probability proportional to
//! `1/degree`. The replicate estimate pools both sets without further weights.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::DegreeDistributionEstimate;
use crate::interval::{confidence_interval, ConfidenceInterval, IntervalMethod};
use crate::stream::{StreamKey, StreamRng};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BootstrapDistribution {
    /// `fkb[b][k]` is replicate `b`'s estimate of `f(k)`.
    pub fkb: Vec<Vec<f64>>,
    /// Replicate mean degrees.
    pub mub: Vec<f64>,
}

impl BootstrapDistribution {
    pub fn replicates(&self) -> usize {
        self.mub.len()
    }

    /// Replicates of `f(k)` across all columns.
    pub fn fk_replicates(&self, k: usize) -> Vec<f64> {
        self.fkb.iter().map(|col| col.get(k).copied().unwrap_or(0.0)).collect()
    }
}

/// Draws `b` weighted bootstrap replicates of the estimate.
///
/// Replicate `i` uses its own generator derived from one key drawn from
/// `rng`, so output does not depend on the number of threads.
pub fn boot_dd<R: Rng + ?Sized>(est: &DegreeDistributionEstimate, b: usize, rng: &mut R) -> Result<BootstrapDistribution> {
    boot_dd_keyed(est, b, StreamKey::from_rng(rng))
}

pub fn boot_dd_keyed(est: &DegreeDistributionEstimate, b: usize, key: StreamKey) -> Result<BootstrapDistribution> {
    if b == 0 {
        return Err(Error::invalid("bootstrap needs at least one replicate"));
    }
    let sampler = ReplicateSampler::new(est)?;
    let columns: Vec<Vec<f64>> = (0..b as u64).into_par_iter().map(|i| sampler.replicate(&mut key.derive(i).rng())).collect();
    let mub = columns.iter().map(|col| mean_of(col)).collect();
    Ok(BootstrapDistribution { fkb: columns, mub })
}

fn mean_of(fk: &[f64]) -> f64 {
    fk.iter().enumerate().map(|(k, f)| k as f64 * f).sum()
}

struct ReplicateSampler {
    k_max: usize,
    n_seed: usize,
    n_nonseed: usize,
    seed_degrees: Vec<usize>,
    seed_index: WeightedIndex<f64>,
    nonseed_degrees: Vec<usize>,
    nonseed_index: Option<WeightedIndex<f64>>,
}

impl ReplicateSampler {
    fn new(est: &DegreeDistributionEstimate) -> Result<Self> {
        let n_seed = est.n_seed_degrees();
        if n_seed == 0 {
            return Err(Error::invalid("bootstrap needs at least one seed"));
        }
        let (seed_degrees, seed_weights): (Vec<usize>, Vec<f64>) =
            est.seed_counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(k, &c)| (k, c as f64)).unzip();
        let (nonseed_degrees, nonseed_weights): (Vec<usize>, Vec<f64>) = est
            .nonseed_counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (k, c as f64 / k as f64))
            .unzip();
        let weights_err = |e| Error::invalid(format!("bootstrap weights: {e}"));
        let seed_index = WeightedIndex::new(seed_weights).map_err(weights_err)?;
        let nonseed_index =
            if nonseed_weights.is_empty() { None } else { Some(WeightedIndex::new(nonseed_weights).map_err(weights_err)?) };
        Ok(ReplicateSampler {
            k_max: est.max_degree(),
            n_seed,
            n_nonseed: est.n_nonseed_degrees(),
            seed_degrees,
            seed_index,
            nonseed_degrees,
            nonseed_index,
        })
    }

    fn replicate(&self, rng: &mut StreamRng) -> Vec<f64> {
        let mut seeds = vec![0usize; self.k_max + 1];
        let mut nonseeds = vec![0usize; self.k_max + 1];
        for _ in 0..self.n_seed {
            seeds[self.seed_degrees[self.seed_index.sample(rng)]] += 1;
        }
        if let Some(index) = &self.nonseed_index {
            for _ in 0..self.n_nonseed {
                nonseeds[self.nonseed_degrees[index.sample(rng)]] += 1;
            }
        }
        let p0 = seeds[0] as f64 / self.n_seed as f64;
        let denominator = (self.n_seed + self.n_nonseed) as f64;
        let mut fk = vec![0.0; self.k_max + 1];
        fk[0] = p0;
        for k in 1..=self.k_max {
            fk[k] = (seeds[k] as f64 + (1.0 - p0) * nonseeds[k] as f64) / denominator;
        }
        fk
    }
}

/// Intervals for the mean degree and every `f(k)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BootIntervals {
    pub mu: ConfidenceInterval,
    pub fk: Vec<ConfidenceInterval>,
}

pub fn boot_ci(
    boot: &BootstrapDistribution,
    point: &DegreeDistributionEstimate,
    level: f64,
    method: IntervalMethod,
) -> Result<BootIntervals> {
    let mu = confidence_interval(&boot.mub, point.mu, level, method)?;
    let fk = (0..point.fk.len())
        .map(|k| confidence_interval(&boot.fk_replicates(k), point.fk[k], level, method))
        .collect::<Result<Vec<_>>>()?;
    Ok(BootIntervals { mu, fk })
}
