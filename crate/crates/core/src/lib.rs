//! Bootstrap inference for network statistics.
//!
//! Two resampling schemes are provided. The patchwork bootstrap grows
//! snowball samples with multiple inclusions ([`lsmi`]) from random seeds,
//! estimates the degree distribution from them ([`estimators`]), resamples the
//! observed degrees ([`patchwork`]) and picks the sampling design by
//! cross-validation ([`cv`]). The vertex bootstrap ([`vertex`]) resamples the
//! rows and columns of a full adjacency matrix.
//!
//! ```
//! use netboot::{lsmi, lsmi_dd, polylog_graph, DegreeDistribution, Seeds, StreamKey};
//!
//! let mut rng = StreamKey::new(7).rng();
//! let dist = DegreeDistribution::polylog(0.001, 2.13)?;
//! let g = polylog_graph(&dist, 500, &mut rng)?;
//! let patch = lsmi(&g, Seeds::Random(20), 2, &mut rng)?;
//! let est = lsmi_dd(&patch)?;
//! assert!(est.mu > 0.0);
//! # Ok::<(), netboot::Error>(())
//! ```

pub mod cv;
pub mod error;
pub mod estimators;
pub mod generators;
pub mod graph;
pub mod interval;
pub mod lsmi;
pub mod montecarlo;
pub mod patchwork;
pub mod stream;
pub mod vertex;

pub use cv::{lsmi_cv, Combination, CoverageRow, CvConfig, CvResult, ProxySampling};
pub use error::{Error, Result};
pub use estimators::{density_from_mu, estimate_from_degrees, lsmi_dd, DegreeDistributionEstimate};
pub use generators::{configuration_model, polylog_graph, sample_degree_sequence, DegreeDistribution};
pub use graph::{
    gamma_fragility, graph_stats, load_adjacency_matrix, load_edge_list, remove_vertices, write_edge_list, AdjacencyMatrix,
    EdgeCleanup, EdgeList, Graph, GraphStats,
};
pub use interval::{confidence_interval, ConfidenceInterval, IntervalMethod};
pub use lsmi::{grow_lsmi, lsmi, lsmi_union, Inclusion, Lsmi, Patch, SeedNest, Seeds};
pub use montecarlo::{run_coverage, CoverageConfig, CoverageMethod, CoverageReport};
pub use patchwork::{boot_ci, boot_dd, BootIntervals, BootstrapDistribution};
pub use stream::{StreamKey, StreamRng};
pub use vertex::{bootstrap_statistic, bootstrap_statistics, compare_densities, vertboot, VertexStatistic};
