//! Vertex bootstrap on adjacency matrices.
//!
//! A replicate draws `n` vertex indices with replacement and takes the induced
//! matrix. When a dyad pairs two copies of the same vertex there is no observed
//! tie to copy, so the cell is filled from the duplicated vertex's own row at a
//! uniformly chosen other vertex.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::graph::{graph_stats, AdjacencyMatrix, Graph};
use crate::interval::{confidence_interval, standard_deviation, ConfidenceInterval, IntervalMethod};
use crate::stream::{StreamKey, StreamRng};

/// Floor applied to a combined standard error of zero.
pub const SE_FLOOR: f64 = 1e-12;

/// One resampled matrix and the vertex draws that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexResample {
    pub draws: Vec<usize>,
    pub matrix: AdjacencyMatrix,
}

fn other_vertex<R: Rng + ?Sized>(v: usize, n: usize, rng: &mut R) -> usize {
    let r = rng.random_range(0..n - 1);
    if r >= v {
        r + 1
    } else {
        r
    }
}

/// One vertex-bootstrap replicate.
pub fn vertboot_replicate<R: Rng + ?Sized>(a: &AdjacencyMatrix, rng: &mut R) -> Result<VertexResample> {
    let n = a.order();
    if n == 0 {
        return Err(Error::invalid("vertex bootstrap needs a nonempty matrix"));
    }
    let mirrored = !a.is_directed() || a.is_symmetric();
    let draws: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    let mut out = AdjacencyMatrix::zeros(n, a.is_directed());
    for (i, &si) in draws.iter().enumerate() {
        for (j, &sj) in draws.iter().enumerate().skip(i + 1) {
            if si != sj {
                out.set(i, j, a.get(si, sj));
                out.set(j, i, a.get(sj, si));
            } else if mirrored {
                let value = a.get(si, other_vertex(si, n, rng));
                out.set(i, j, value);
                out.set(j, i, value);
            } else {
                out.set(i, j, a.get(si, other_vertex(si, n, rng)));
                out.set(j, i, a.get(si, other_vertex(si, n, rng)));
            }
        }
    }
    Ok(VertexResample { draws, matrix: out })
}

/// `b` resampled matrices. Replicate `i` uses a generator derived from one key
/// drawn from `rng`.
pub fn vertboot<R: Rng + ?Sized>(a: &AdjacencyMatrix, b: usize, rng: &mut R) -> Result<Vec<AdjacencyMatrix>> {
    if b == 0 {
        return Err(Error::invalid("vertex bootstrap needs at least one replicate"));
    }
    let key = StreamKey::from_rng(rng);
    (0..b as u64)
        .into_par_iter()
        .map(|i| vertboot_replicate(a, &mut key.derive(i).rng()).map(|r| r.matrix))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexStatistic {
    Density,
    MeanDegree,
    Transitivity,
}

impl std::str::FromStr for VertexStatistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "density" => Ok(VertexStatistic::Density),
            "mean_degree" | "mean-degree" => Ok(VertexStatistic::MeanDegree),
            "transitivity" => Ok(VertexStatistic::Transitivity),
            other => Err(Error::invalid(format!("unknown statistic `{other}`"))),
        }
    }
}

impl VertexStatistic {
    /// Value on one matrix. Transitivity requires a symmetric matrix.
    pub fn evaluate(self, a: &AdjacencyMatrix) -> Result<f64> {
        match self {
            VertexStatistic::Density => Ok(a.density()),
            VertexStatistic::MeanDegree => Ok(a.mean_degree()),
            VertexStatistic::Transitivity => {
                if a.is_directed() {
                    return Err(Error::invalid("transitivity is only defined here for undirected matrices"));
                }
                Ok(graph_stats(&a.to_graph()?).transitivity)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatisticBootstrap {
    pub stat: VertexStatistic,
    pub observed: f64,
    /// Standard deviation of the replicates.
    pub se: f64,
    #[serde(serialize_with = "interval_summary")]
    pub ci: ConfidenceInterval,
    #[serde(skip)]
    pub replicates: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates_path: Option<String>,
}

fn interval_summary<S: Serializer>(ci: &ConfidenceInterval, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Summary {
        lower: f64,
        upper: f64,
        level: f64,
    }
    Summary { lower: ci.lower, upper: ci.upper, level: ci.level }.serialize(s)
}

/// Bootstraps several statistics over the same `b` replicates.
///
/// Matrices are evaluated as they are produced and then dropped.
pub fn bootstrap_statistics<R: Rng + ?Sized>(
    a: &AdjacencyMatrix,
    b: usize,
    stats: &[VertexStatistic],
    level: f64,
    rng: &mut R,
) -> Result<Vec<StatisticBootstrap>> {
    if b < 2 {
        return Err(Error::invalid("bootstrap intervals need B >= 2"));
    }
    let observed = stats.iter().map(|s| s.evaluate(a)).collect::<Result<Vec<_>>>()?;
    let key = StreamKey::from_rng(rng);
    let rows: Vec<Vec<f64>> = (0..b as u64)
        .into_par_iter()
        .map(|i| {
            let m = vertboot_replicate(a, &mut key.derive(i).rng())?.matrix;
            stats.iter().map(|s| s.evaluate(&m)).collect()
        })
        .collect::<Result<_>>()?;
    stats
        .iter()
        .enumerate()
        .map(|(j, &stat)| {
            let replicates: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            let ci = confidence_interval(&replicates, observed[j], level, IntervalMethod::Percentile)?;
            Ok(StatisticBootstrap { stat, observed: observed[j], se: standard_deviation(&replicates), ci, replicates, replicates_path: None })
        })
        .collect()
}

pub fn bootstrap_statistic<R: Rng + ?Sized>(
    a: &AdjacencyMatrix,
    b: usize,
    stat: VertexStatistic,
    level: f64,
    rng: &mut R,
) -> Result<StatisticBootstrap> {
    Ok(bootstrap_statistics(a, b, &[stat], level, rng)?.remove(0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityComparison {
    pub a: usize,
    pub b: usize,
    pub density_a: f64,
    pub density_b: f64,
    pub se_a: f64,
    pub se_b: f64,
    pub z: f64,
    pub p_value: f64,
    /// The combined standard error was zero and was replaced by [`SE_FLOOR`].
    pub degenerate_se: bool,
}

/// Pairwise two-sample z-tests on density, with standard errors from
/// independent vertex-bootstrap runs.
pub fn compare_densities<R: Rng + ?Sized>(matrices: &[AdjacencyMatrix], b: usize, rng: &mut R) -> Result<Vec<DensityComparison>> {
    if matrices.len() < 2 {
        return Err(Error::invalid("comparison needs at least two networks"));
    }
    if let Some(i) = matrices.iter().position(|m| m.order() < 2) {
        return Err(Error::degenerate(format!("network {i} has fewer than two vertices")));
    }
    let key = StreamKey::from_rng(rng);
    let summaries = matrices
        .iter()
        .enumerate()
        .map(|(i, m)| bootstrap_statistic(m, b, VertexStatistic::Density, 0.95, &mut key.derive(i as u64).rng()))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for u in 0..summaries.len() {
        for v in u + 1..summaries.len() {
            let (su, sv) = (&summaries[u], &summaries[v]);
            let combined = (su.se.powi(2) + sv.se.powi(2)).sqrt();
            let degenerate_se = combined < SE_FLOOR;
            let diff = su.observed - sv.observed;
            let z = if diff == 0.0 { 0.0 } else { diff / combined.max(SE_FLOOR) };
            rows.push(DensityComparison {
                a: u,
                b: v,
                density_a: su.observed,
                density_b: sv.observed,
                se_a: su.se,
                se_b: sv.se,
                z,
                p_value: erfc(z.abs() / std::f64::consts::SQRT_2),
                degenerate_se,
            });
        }
    }
    Ok(rows)
}

/// Sum of all entries of a vertex-bootstrap replicate of `g`'s adjacency
/// matrix, sampled without building the matrix.
///
/// With `c_v` copies of vertex `v` among the draws, distinct-vertex dyads
/// contribute `c_u * c_v` per edge, and each of the `c_v (c_v - 1) / 2`
/// duplicate dyads of `v` is a tie with probability `deg(v) / (n - 1)`.
/// Matches [`vertboot_replicate`] in distribution in `O(n + m)` time.
pub fn resampled_degree_total<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> u64 {
    let n = g.order();
    let mut copies = vec![0u64; n];
    for _ in 0..n {
        copies[rng.random_range(0..n)] += 1;
    }
    degree_total_given_copies(g, &copies, rng)
}

pub(crate) fn degree_total_given_copies<R: Rng + ?Sized>(g: &Graph, copies: &[u64], rng: &mut R) -> u64 {
    let n = g.order();
    let mut half: u64 = g.edges().map(|(u, v)| copies[u] * copies[v]).sum();
    for (v, &c) in copies.iter().enumerate() {
        if c >= 2 && g.degree(v) > 0 {
            let pairs = c * (c - 1) / 2;
            let p = g.degree(v) as f64 / (n - 1) as f64;
            half += Binomial::new(pairs, p).expect("probability in [0, 1]").sample(rng);
        }
    }
    2 * half
}

/// Percentile interval for the mean degree of `g` from `b` vertex-bootstrap
/// replicates, using [`resampled_degree_total`].
pub fn vertex_mean_degree_interval(g: &Graph, b: usize, level: f64, key: StreamKey) -> Result<ConfidenceInterval> {
    if g.order() < 2 {
        return Err(Error::degenerate("vertex bootstrap needs at least two vertices"));
    }
    let n = g.order() as f64;
    let replicates: Vec<f64> = (0..b as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng: StreamRng = key.derive(i).rng();
            resampled_degree_total(g, &mut rng) as f64 / n
        })
        .collect();
    confidence_interval(&replicates, g.mean_degree(), level, IntervalMethod::Percentile)
}
