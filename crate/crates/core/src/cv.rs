//! Cross-validated choice of the seed-wave combination.
//!
//! Every combination on the grid gets its own bootstrap interval for the mean
//! degree. Proxy statistics, computed from vertices already present in the
//! patch, stand in for the unknown truth: the combination whose interval
//! captures a share of proxies closest to the nominal level wins.

use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{density_from_mu, lsmi_dd};
use crate::graph::Graph;
use crate::interval::{confidence_interval, ConfidenceInterval, IntervalMethod};
use crate::lsmi::{lsmi_union, Patch, SeedNest};
use crate::patchwork::boot_dd_keyed;
use crate::stream::StreamKey;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProxySampling {
    /// Falls back to sampling with replacement when the pool is smaller than
    /// the proxy size.
    #[default]
    WithoutReplacement,
    WithReplacement,
}

/// How the degrees in a proxy sample are averaged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProxyStatistic {
    /// Seeds count once and every other patch vertex `mu_s / degree` times,
    /// the weights of the patch estimator. Snowball waves reach vertices in
    /// proportion to their degree, and the weights undo that.
    #[default]
    Weighted,
    /// Plain average of the sampled degrees.
    Mean,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    pub n_seeds: Vec<usize>,
    pub n_wave: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub level: f64,
    pub proxy_reps: usize,
    pub proxy_size: usize,
    pub method: IntervalMethod,
    pub proxy_sampling: ProxySampling,
    pub proxy_statistic: ProxyStatistic,
    /// Independent big patches; coverage and width are averaged over them and
    /// the reported interval comes from the first.
    pub patch_repeats: usize,
}

impl CvConfig {
    /// Grid of seed counts and waves `1..=n_wave`, with 19 proxies of 30
    /// vertices, `B = 100` and a 95% percentile interval.
    pub fn new(n_seeds: Vec<usize>, n_wave: usize) -> Self {
        CvConfig {
            n_seeds,
            n_wave,
            b: 100,
            level: 0.95,
            proxy_reps: 19,
            proxy_size: 30,
            method: IntervalMethod::Percentile,
            proxy_sampling: ProxySampling::WithoutReplacement,
            proxy_statistic: ProxyStatistic::Weighted,
            patch_repeats: 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_seeds.is_empty() || self.n_seeds.contains(&0) {
            return Err(Error::invalid("seed-count grid must be nonempty and positive"));
        }
        if self.n_wave == 0 {
            return Err(Error::invalid("cross-validation needs at least one wave"));
        }
        if self.b < 2 {
            return Err(Error::invalid("cross-validation needs B >= 2"));
        }
        if self.proxy_reps == 0 || self.proxy_size == 0 {
            return Err(Error::invalid("proxy sampling needs positive repetitions and size"));
        }
        if self.patch_repeats == 0 {
            return Err(Error::invalid("patch_repeats must be positive"));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::invalid(format!("level {} outside (0, 1)", self.level)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Combination {
    pub n_seed: usize,
    pub n_wave: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageRow {
    pub n_seed: usize,
    pub n_wave: usize,
    /// Share of proxy statistics inside the interval.
    pub coverage: f64,
    pub width: f64,
    #[serde(skip)]
    pub interval: ConfidenceInterval,
    #[serde(skip)]
    pub estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CvResult {
    pub bci: ConfidenceInterval,
    pub estimate: f64,
    pub best_combination: Combination,
    pub seeds: Vec<usize>,
    pub coverage_table: Vec<CoverageRow>,
    #[serde(skip)]
    pub proxies: Vec<f64>,
}

impl CvResult {
    /// Rescales mean-degree results to densities of an `n`-vertex graph.
    pub fn to_density(&self, n: usize) -> Result<CvResult> {
        let factor = density_from_mu(1.0, n)?;
        let mut out = self.clone();
        out.bci = self.bci.scaled(factor);
        out.estimate *= factor;
        for row in &mut out.coverage_table {
            row.interval = row.interval.scaled(factor);
            row.width = row.interval.width();
            row.estimate *= factor;
        }
        out.proxies.iter_mut().for_each(|p| *p *= factor);
        Ok(out)
    }
}

/// Share of `proxies` inside `ci`, endpoints included.
pub fn proxy_coverage(proxies: &[f64], ci: &ConfidenceInterval) -> f64 {
    if proxies.is_empty() {
        return 0.0;
    }
    proxies.iter().filter(|&&p| ci.contains(p)).count() as f64 / proxies.len() as f64
}

/// Index of the row whose coverage is closest to `level`; ties go to fewer
/// waves, then fewer seeds.
pub fn select_combination(rows: &[CoverageRow], level: f64) -> Option<usize> {
    let gap = |r: &CoverageRow| (r.coverage - level).abs();
    (0..rows.len()).min_by(|&a, &b| {
        let (ga, gb) = (gap(&rows[a]), gap(&rows[b]));
        let by_gap = if (ga - gb).abs() <= 1e-12 { std::cmp::Ordering::Equal } else { ga.total_cmp(&gb) };
        by_gap
            .then(rows[a].n_wave.cmp(&rows[b].n_wave))
            .then(rows[a].n_seed.cmp(&rows[b].n_seed))
    })
}

/// Distinct patch vertices with their degrees and proxy weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ProxyPool {
    degrees: Vec<usize>,
    weights: Vec<f64>,
}

impl ProxyPool {
    pub fn from_patch(patch: &Patch, statistic: ProxyStatistic) -> Self {
        let seeds: HashSet<usize> = patch.seeds().into_iter().collect();
        let seed_degrees = patch.seed_degrees();
        let mu_s = seed_degrees.iter().sum::<usize>() as f64 / seed_degrees.len().max(1) as f64;
        let (degrees, weights) = patch
            .distinct_vertices()
            .into_iter()
            .map(|(id, k)| match statistic {
                ProxyStatistic::Weighted if !seeds.contains(&id) => (k, mu_s / k as f64),
                _ => (k, 1.0),
            })
            .unzip();
        ProxyPool { degrees, weights }
    }

    /// A pool whose proxies are plain means of `degrees`.
    pub fn unweighted(degrees: Vec<usize>) -> Self {
        let weights = vec![1.0; degrees.len()];
        ProxyPool { degrees, weights }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    fn statistic(&self, members: impl Iterator<Item = usize>) -> f64 {
        let (num, den) = members.fold((0.0, 0.0), |(num, den), i| {
            (num + self.weights[i] * self.degrees[i] as f64, den + self.weights[i])
        });
        num / den
    }
}

/// Proxy mean degrees of `reps` samples of `size` vertices from the pool.
pub fn draw_proxies<R: Rng + ?Sized>(
    pool: &ProxyPool,
    reps: usize,
    size: usize,
    sampling: ProxySampling,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if pool.is_empty() {
        return Err(Error::degenerate("proxy pool is empty"));
    }
    let n = pool.len();
    let without = sampling == ProxySampling::WithoutReplacement && n >= size;
    Ok((0..reps)
        .map(|_| {
            if without {
                pool.statistic(rand::seq::index::sample(rng, n, size).into_iter())
            } else {
                let picks: Vec<usize> = (0..size).map(|_| rng.random_range(0..n)).collect();
                pool.statistic(picks.into_iter())
            }
        })
        .collect())
}

/// Runs the full patchwork pipeline with cross-validation over the grid.
pub fn lsmi_cv<R: Rng + ?Sized>(g: &Graph, cfg: &CvConfig, rng: &mut R) -> Result<CvResult> {
    cfg.validate()?;
    let key = StreamKey::from_rng(rng);
    let mut seed_counts = cfg.n_seeds.clone();
    seed_counts.sort_unstable();
    seed_counts.dedup();
    let grid: Vec<Combination> = seed_counts
        .iter()
        .flat_map(|&n_seed| (1..=cfg.n_wave).map(move |n_wave| Combination { n_seed, n_wave }))
        .collect();

    let mut runs = Vec::with_capacity(cfg.patch_repeats);
    for r in 0..cfg.patch_repeats as u64 {
        let rkey = key.derive(r);
        let nest = lsmi_union(g, &seed_counts, cfg.n_wave, &mut rkey.derive(0).rng())?;
        let pool = ProxyPool::from_patch(&nest.big_patch, cfg.proxy_statistic);
        let proxies = draw_proxies(&pool, cfg.proxy_reps, cfg.proxy_size, cfg.proxy_sampling, &mut rkey.derive(1).rng())?;
        let rows = evaluate_grid(&nest, &grid, &proxies, cfg, rkey.derive(2))?;
        runs.push((nest, proxies, rows));
    }

    let repeats = runs.len() as f64;
    let mut table = runs[0].2.clone();
    for (j, row) in table.iter_mut().enumerate() {
        row.coverage = runs.iter().map(|run| run.2[j].coverage).sum::<f64>() / repeats;
        row.width = runs.iter().map(|run| run.2[j].width).sum::<f64>() / repeats;
    }
    let best = select_combination(&table, cfg.level).expect("grid is nonempty");
    let (nest, proxies, rows) = runs.swap_remove(0);
    let chosen = &rows[best];
    let seeds = nest.patch_view(chosen.n_seed, chosen.n_wave)?.seeds();
    Ok(CvResult {
        bci: chosen.interval,
        estimate: chosen.estimate,
        best_combination: grid[best],
        seeds,
        coverage_table: table,
        proxies,
    })
}

fn evaluate_grid(
    nest: &SeedNest,
    grid: &[Combination],
    proxies: &[f64],
    cfg: &CvConfig,
    key: StreamKey,
) -> Result<Vec<CoverageRow>> {
    grid.par_iter()
        .enumerate()
        .map(|(j, c)| {
            let view = nest.patch_view(c.n_seed, c.n_wave)?;
            let est = lsmi_dd(&view)?;
            let boot = boot_dd_keyed(&est, cfg.b, key.derive(j as u64))?;
            let interval = confidence_interval(&boot.mub, est.mu, cfg.level, cfg.method)?;
            Ok(CoverageRow {
                n_seed: c.n_seed,
                n_wave: c.n_wave,
                coverage: proxy_coverage(proxies, &interval),
                width: interval.width(),
                interval,
                estimate: est.mu,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{polylog_graph, DegreeDistribution};
    use proptest::prelude::*;

    fn test_graph(seed: u64) -> Graph {
        let dist = DegreeDistribution::polylog(0.001, 2.13).unwrap();
        polylog_graph(&dist, 400, &mut StreamKey::new(seed).rng()).unwrap()
    }

    fn row(n_seed: usize, n_wave: usize, coverage: f64) -> CoverageRow {
        let interval = ConfidenceInterval { lower: 0.0, upper: 1.0, level: 0.95, method: IntervalMethod::Percentile, point: 0.5 };
        CoverageRow { n_seed, n_wave, coverage, width: 1.0, interval, estimate: 0.5 }
    }

    #[test]
    fn default_proxy_settings() {
        let cfg = CvConfig::new(vec![10, 20, 30], 5);
        assert_eq!((cfg.proxy_reps, cfg.proxy_size), (19, 30));
    }

    #[test]
    fn selection_prefers_fewer_waves_then_seeds() {
        let rows = vec![row(20, 1, 0.9), row(10, 2, 1.0), row(10, 1, 0.5), row(5, 2, 0.9)];
        assert_eq!(select_combination(&rows, 0.95), Some(0));
        let rows = vec![row(20, 2, 0.9), row(10, 2, 0.9)];
        assert_eq!(select_combination(&rows, 0.95), Some(1));
        assert_eq!(select_combination(&[], 0.95), None);
    }

    #[test]
    fn single_combination_grid() {
        let g = test_graph(1);
        let mut cfg = CvConfig::new(vec![10], 1);
        cfg.b = 50;
        let out = lsmi_cv(&g, &cfg, &mut StreamKey::new(2).rng()).unwrap();
        assert_eq!(out.best_combination, Combination { n_seed: 10, n_wave: 1 });
        assert_eq!(out.coverage_table.len(), 1);
        assert_eq!(out.seeds.len(), 10);
        assert_eq!(out.proxies.len(), 19);
    }

    #[test]
    fn result_matches_its_table_row_and_is_reproducible() {
        let g = test_graph(3);
        let mut cfg = CvConfig::new(vec![5, 10], 3);
        cfg.b = 60;
        let a = lsmi_cv(&g, &cfg, &mut StreamKey::new(4).rng()).unwrap();
        let b = lsmi_cv(&g, &cfg, &mut StreamKey::new(4).rng()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.coverage_table.len(), 6);
        let row = a
            .coverage_table
            .iter()
            .find(|r| r.n_seed == a.best_combination.n_seed && r.n_wave == a.best_combination.n_wave)
            .unwrap();
        assert_eq!(row.interval, a.bci);
        assert_eq!(a.seeds.len(), a.best_combination.n_seed);

        let json = serde_json::to_value(&a).unwrap();
        for field in ["bci", "estimate", "best_combination", "seeds", "coverage_table"] {
            assert!(json.get(field).is_some(), "{field}");
        }
        assert_eq!(json["bci"]["method"], "percentile");
        assert!(json["coverage_table"][0].get("coverage").is_some());
    }

    #[test]
    fn repeated_patches_average_coverage() {
        let g = test_graph(5);
        let mut cfg = CvConfig::new(vec![5], 2);
        cfg.b = 40;
        cfg.patch_repeats = 3;
        let out = lsmi_cv(&g, &cfg, &mut StreamKey::new(6).rng()).unwrap();
        assert!(out.coverage_table.iter().all(|r| (0.0..=1.0).contains(&r.coverage)));
    }

    #[test]
    fn config_errors() {
        let g = test_graph(7);
        let rng = &mut StreamKey::new(0).rng();
        assert!(lsmi_cv(&g, &CvConfig::new(vec![], 2), rng).is_err());
        assert!(lsmi_cv(&g, &CvConfig::new(vec![5], 0), rng).is_err());
        assert!(lsmi_cv(&g, &CvConfig::new(vec![5000], 1), rng).is_err());
        assert!(draw_proxies(&ProxyPool::unweighted(vec![]), 3, 3, ProxySampling::WithoutReplacement, rng).is_err());
    }

    #[test]
    fn weighted_proxy_over_whole_star_matches_estimator() {
        let (g, _) = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        let patch = crate::lsmi::lsmi(&g, crate::lsmi::Seeds::Explicit(vec![0]), 1, &mut StreamKey::new(0).rng()).unwrap();
        let weighted = ProxyPool::from_patch(&patch, ProxyStatistic::Weighted);
        let plain = ProxyPool::from_patch(&patch, ProxyStatistic::Mean);
        let rng = &mut StreamKey::new(1).rng();
        let w = draw_proxies(&weighted, 3, 4, ProxySampling::WithoutReplacement, rng).unwrap();
        let m = draw_proxies(&plain, 3, 4, ProxySampling::WithoutReplacement, rng).unwrap();
        let mu = lsmi_dd(&patch).unwrap().mu;
        assert!(w.iter().all(|p| (p - mu).abs() < 1e-12), "{w:?} vs {mu}");
        assert!(m.iter().all(|&p| p == 1.5));
    }

    #[test]
    fn small_pool_falls_back_to_replacement() {
        let pool = ProxyPool::unweighted(vec![1, 3]);
        let proxies = draw_proxies(&pool, 50, 5, ProxySampling::WithoutReplacement, &mut StreamKey::new(1).rng()).unwrap();
        assert!(proxies.iter().all(|&p| (1.0..=3.0).contains(&p)));
        let exact = draw_proxies(&pool, 5, 2, ProxySampling::WithoutReplacement, &mut StreamKey::new(1).rng()).unwrap();
        assert!(exact.iter().all(|&p| p == 2.0));
    }

    #[test]
    fn density_rescaling() {
        let g = test_graph(8);
        let mut cfg = CvConfig::new(vec![8], 1);
        cfg.b = 30;
        let mu = lsmi_cv(&g, &cfg, &mut StreamKey::new(1).rng()).unwrap();
        let d = mu.to_density(g.order()).unwrap();
        let n1 = (g.order() - 1) as f64;
        assert!((d.bci.lower * n1 - mu.bci.lower).abs() < 1e-12);
        assert!((d.estimate * n1 - mu.estimate).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn selection_is_scale_free(
            proxies in proptest::collection::vec(0.5f64..6.0, 1..30),
            bounds in proptest::collection::vec((0.0f64..6.0, 0.0f64..3.0), 1..12),
            exponent in -8i32..8,
        ) {
            // powers of two scale floats exactly, so containment is preserved bit for bit
            let factor = 2f64.powi(exponent);
            let grid = |scale: f64| -> Vec<CoverageRow> {
                let scaled: Vec<f64> = proxies.iter().map(|p| p * scale).collect();
                bounds.iter().enumerate().map(|(j, &(lo, w))| {
                    let ci = ConfidenceInterval { lower: lo, upper: lo + w, level: 0.95, method: IntervalMethod::Percentile, point: lo }.scaled(scale);
                    let mut r = row(1 + j % 3, 1 + j / 3, 0.0);
                    r.coverage = proxy_coverage(&scaled, &ci);
                    r
                }).collect()
            };
            let base = grid(1.0);
            let scaled = grid(factor);
            for (a, b) in base.iter().zip(&scaled) {
                prop_assert_eq!(a.coverage, b.coverage);
            }
            prop_assert_eq!(select_combination(&base, 0.95), select_combination(&scaled, 0.95));
        }
    }
}
