//! Coverage experiments on synthetic graphs.
//!
//! Each replication generates a polylogarithmic configuration-model graph,
//! optionally removes a fraction of its vertices, builds a confidence interval
//! for the mean degree and records whether it contains the mean of the
//! generating distribution.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cv::{lsmi_cv, Combination, CvConfig, ProxySampling, ProxyStatistic};
use crate::error::{Error, Result};
use crate::generators::{polylog_graph, DegreeDistribution};
use crate::graph::{remove_vertices, Graph};
use crate::interval::{standard_deviation, ConfidenceInterval, IntervalMethod};
use crate::stream::StreamKey;
use crate::vertex::vertex_mean_degree_interval;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolylogParams {
    pub delta: f64,
    pub lambda: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverageMethod {
    Patchwork,
    Vertex,
}

impl CoverageMethod {
    pub fn name(self) -> &'static str {
        match self {
            CoverageMethod::Patchwork => "patchwork",
            CoverageMethod::Vertex => "vertex",
        }
    }
}

fn default_seed_counts() -> Vec<usize> {
    vec![10, 20]
}
fn default_max_wave() -> usize {
    3
}
fn default_b() -> usize {
    200
}
fn default_level() -> f64 {
    0.95
}
fn default_proxy_reps() -> usize {
    13
}
fn default_proxy_size() -> usize {
    100
}

/// Experiment settings, read from JSON. Omitted fields take the defaults of
/// a small light-tail cell: seeds {10, 20}, waves 1..=3, `B = 200`,
/// 13 proxies of 100 vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageConfig {
    pub distribution: PolylogParams,
    pub order: usize,
    #[serde(default)]
    pub removal_fraction: f64,
    pub method: CoverageMethod,
    #[serde(default = "default_seed_counts")]
    pub seed_counts: Vec<usize>,
    #[serde(default = "default_max_wave")]
    pub max_wave: usize,
    #[serde(rename = "B", default = "default_b")]
    pub b: usize,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default = "default_proxy_reps")]
    pub proxy_reps: usize,
    #[serde(default = "default_proxy_size")]
    pub proxy_size: usize,
    #[serde(default)]
    pub ci_method: IntervalMethod,
    #[serde(default)]
    pub proxy_sampling: ProxySampling,
    #[serde(default)]
    pub proxy_statistic: ProxyStatistic,
    pub replications: usize,
    #[serde(default)]
    pub master_seed: u64,
}

impl CoverageConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::invalid("coverage needs at least one replication"));
        }
        if !(0.0..1.0).contains(&self.removal_fraction) {
            return Err(Error::invalid(format!("removal fraction {} outside [0, 1)", self.removal_fraction)));
        }
        if self.order < 2 {
            return Err(Error::invalid("graph order must be at least 2"));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::invalid(format!("level {} outside (0, 1)", self.level)));
        }
        if self.b < 2 {
            return Err(Error::invalid("coverage needs B >= 2"));
        }
        DegreeDistribution::polylog(self.distribution.delta, self.distribution.lambda)?;
        Ok(())
    }

    pub fn cv_config(&self) -> CvConfig {
        CvConfig {
            b: self.b,
            level: self.level,
            proxy_reps: self.proxy_reps,
            proxy_size: self.proxy_size,
            method: self.ci_method,
            proxy_sampling: self.proxy_sampling,
            proxy_statistic: self.proxy_statistic,
            ..CvConfig::new(self.seed_counts.clone(), self.max_wave)
        }
    }

    /// Label used in the CSV `distribution` column.
    pub fn distribution_label(&self) -> String {
        format!("polylog({};{})", self.distribution.delta, self.distribution.lambda)
    }
}

/// Interval for one replication's graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplicationInterval {
    pub interval: ConfidenceInterval,
    pub best_combination: Option<Combination>,
}

/// A procedure producing a mean-degree interval from a graph and a key.
pub trait IntervalProcedure: Sync {
    fn interval(&self, g: &Graph, key: StreamKey) -> Result<ReplicationInterval>;
}

pub struct PatchworkProcedure(pub CvConfig);

impl IntervalProcedure for PatchworkProcedure {
    fn interval(&self, g: &Graph, key: StreamKey) -> Result<ReplicationInterval> {
        let res = lsmi_cv(g, &self.0, &mut key.rng())?;
        Ok(ReplicationInterval { interval: res.bci, best_combination: Some(res.best_combination) })
    }
}

pub struct VertexProcedure {
    pub b: usize,
    pub level: f64,
}

impl IntervalProcedure for VertexProcedure {
    fn interval(&self, g: &Graph, key: StreamKey) -> Result<ReplicationInterval> {
        let interval = vertex_mean_degree_interval(g, self.b, self.level, key)?;
        Ok(ReplicationInterval { interval, best_combination: None })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplicationRecord {
    pub replication: usize,
    pub realized_order: usize,
    pub realized_mean: f64,
    pub lower: f64,
    pub upper: f64,
    pub width: f64,
    pub covered: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_combination: Option<Combination>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverageReport {
    pub config: CoverageConfig,
    /// Mean of the generating distribution.
    pub truth: f64,
    pub coverage: f64,
    /// Binomial standard error of `coverage`.
    pub coverage_se: f64,
    /// `coverage ± 2 coverage_se`, clipped to `[0, 1]`.
    pub coverage_band: (f64, f64),
    pub mean_width: f64,
    /// Standard deviation of the interval widths.
    pub width_se: f64,
    pub records: Vec<ReplicationRecord>,
}

pub const CSV_HEADER: &str = "distribution,n,removal,method,coverage,width,width_se";

impl CoverageReport {
    pub fn from_records(config: CoverageConfig, truth: f64, records: Vec<ReplicationRecord>) -> Self {
        let m = records.len() as f64;
        let coverage = records.iter().filter(|r| r.covered).count() as f64 / m;
        let coverage_se = (coverage * (1.0 - coverage) / m).sqrt();
        let widths: Vec<f64> = records.iter().map(|r| r.width).collect();
        let mean_width = widths.iter().sum::<f64>() / m;
        CoverageReport {
            truth,
            coverage,
            coverage_se,
            coverage_band: ((coverage - 2.0 * coverage_se).max(0.0), (coverage + 2.0 * coverage_se).min(1.0)),
            mean_width,
            width_se: standard_deviation(&widths),
            records,
            config,
        }
    }

    /// One CSV data row matching [`CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.config.distribution_label(),
            self.config.order,
            self.config.removal_fraction,
            self.config.method.name(),
            self.coverage,
            self.mean_width,
            self.width_se
        )
    }
}

/// Runs the configured experiment on `workers` threads (0 uses the rayon
/// default). Results do not depend on `workers`.
pub fn run_coverage(cfg: &CoverageConfig, workers: usize) -> Result<CoverageReport> {
    cfg.validate()?;
    match cfg.method {
        CoverageMethod::Patchwork => run_coverage_with(cfg, &PatchworkProcedure(cfg.cv_config()), workers),
        CoverageMethod::Vertex => run_coverage_with(cfg, &VertexProcedure { b: cfg.b, level: cfg.level }, workers),
    }
}

/// Runs the experiment with an arbitrary interval procedure.
///
/// Replication `r` draws everything from `StreamKey::new(master_seed).derive(r)`.
pub fn run_coverage_with<P: IntervalProcedure>(cfg: &CoverageConfig, procedure: &P, workers: usize) -> Result<CoverageReport> {
    cfg.validate()?;
    let dist = DegreeDistribution::polylog(cfg.distribution.delta, cfg.distribution.lambda)?;
    let truth = dist.mean();
    let master = StreamKey::new(cfg.master_seed);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    let records = pool.install(|| {
        (0..cfg.replications)
            .into_par_iter()
            .map(|r| replicate(cfg, &dist, truth, procedure, master.derive(r as u64), r))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(CoverageReport::from_records(cfg.clone(), truth, records))
}

fn replicate<P: IntervalProcedure>(
    cfg: &CoverageConfig,
    dist: &DegreeDistribution,
    truth: f64,
    procedure: &P,
    key: StreamKey,
    r: usize,
) -> Result<ReplicationRecord> {
    let mut g = polylog_graph(dist, cfg.order, &mut key.derive(0).rng())?;
    if cfg.removal_fraction > 0.0 {
        g = remove_vertices(&g, cfg.removal_fraction, &mut key.derive(1).rng())?.graph;
    }
    let out = procedure.interval(&g, key.derive(2))?;
    Ok(ReplicationRecord {
        replication: r,
        realized_order: g.order(),
        realized_mean: g.mean_degree(),
        lower: out.interval.lower,
        upper: out.interval.upper,
        width: out.interval.width(),
        covered: out.interval.contains(truth),
        best_combination: out.best_combination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(method: CoverageMethod) -> CoverageConfig {
        CoverageConfig {
            distribution: PolylogParams { delta: 0.001, lambda: 2.13 },
            order: 200,
            removal_fraction: 0.0,
            method,
            seed_counts: vec![5, 10],
            max_wave: 2,
            b: 50,
            level: 0.95,
            proxy_reps: 5,
            proxy_size: 20,
            ci_method: IntervalMethod::Percentile,
            proxy_sampling: ProxySampling::WithoutReplacement,
            proxy_statistic: ProxyStatistic::Weighted,
            replications: 6,
            master_seed: 17,
        }
    }

    struct Everything;

    impl IntervalProcedure for Everything {
        fn interval(&self, _: &Graph, _: StreamKey) -> Result<ReplicationInterval> {
            let interval = ConfidenceInterval {
                lower: f64::NEG_INFINITY,
                upper: f64::INFINITY,
                level: 0.95,
                method: IntervalMethod::Percentile,
                point: 0.0,
            };
            Ok(ReplicationInterval { interval, best_combination: None })
        }
    }

    #[test]
    fn unbounded_interval_always_covers() {
        let report = run_coverage_with(&small(CoverageMethod::Patchwork), &Everything, 2).unwrap();
        assert_eq!(report.coverage, 1.0);
        assert_eq!(report.coverage_se, 0.0);
        assert_eq!(report.records.len(), 6);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        for method in [CoverageMethod::Patchwork, CoverageMethod::Vertex] {
            let cfg = small(method);
            let one = run_coverage(&cfg, 1).unwrap();
            let four = run_coverage(&cfg, 4).unwrap();
            assert_eq!(one, four);
            assert_eq!(one.csv_row(), four.csv_row());
        }
    }

    #[test]
    fn removal_shrinks_graphs() {
        let mut cfg = small(CoverageMethod::Vertex);
        cfg.removal_fraction = 0.05;
        let report = run_coverage(&cfg, 2).unwrap();
        assert!(report.records.iter().all(|r| r.realized_order == 190));
    }

    #[test]
    fn config_validation() {
        let mut cfg = small(CoverageMethod::Vertex);
        cfg.replications = 0;
        assert!(run_coverage(&cfg, 1).is_err());
        let mut cfg = small(CoverageMethod::Vertex);
        cfg.removal_fraction = 1.0;
        assert!(run_coverage(&cfg, 1).is_err());
    }

    #[test]
    fn config_json_defaults() {
        let cfg: CoverageConfig = serde_json::from_str(
            r#"{"distribution":{"delta":0.001,"lambda":2.13},"order":1000,"method":"patchwork","replications":3}"#,
        )
        .unwrap();
        assert_eq!(cfg.seed_counts, vec![10, 20]);
        assert_eq!((cfg.max_wave, cfg.b, cfg.proxy_reps, cfg.proxy_size), (3, 200, 13, 100));
        assert_eq!(cfg.removal_fraction, 0.0);
        assert!(serde_json::from_str::<CoverageConfig>(r#"{"order":10}"#).is_err());
    }

    #[test]
    fn aggregation_ignores_record_order() {
        let cfg = small(CoverageMethod::Vertex);
        let report = run_coverage(&cfg, 2).unwrap();
        let mut reversed = report.records.clone();
        reversed.reverse();
        let again = CoverageReport::from_records(cfg, report.truth, reversed);
        assert_eq!(again.coverage, report.coverage);
        assert!((again.mean_width - report.mean_width).abs() < 1e-12);
    }

    #[test]
    fn csv_row_layout() {
        let report = run_coverage_with(&small(CoverageMethod::Patchwork), &Everything, 1).unwrap();
        let row = report.csv_row();
        assert_eq!(row.split(',').count(), CSV_HEADER.split(',').count());
        assert!(row.starts_with("polylog(0.001;2.13),200,0,patchwork,1,"));
    }
}
