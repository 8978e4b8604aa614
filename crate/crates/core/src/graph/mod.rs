//! Simple undirected graphs, their file formats, and whole-graph statistics.

mod io;
mod matrix;
mod stats;

pub use io::{load_adjacency_matrix, load_edge_list, write_edge_list, EdgeList, MatrixLoad};
pub use matrix::AdjacencyMatrix;
pub use stats::{gamma_fragility, gamma_from_ccdf, graph_stats, triangle_count, FragilityFit, GraphStats};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// A simple undirected graph over vertex ids `0..order`.
///
/// Neighbor lists are sorted and free of duplicates and self-loops. The type
/// is immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    size: usize,
}

/// What [`Graph::from_edges`] had to discard.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EdgeCleanup {
    pub self_loops: usize,
    pub duplicates: usize,
}

impl Graph {
    /// Graph with `order` vertices and no edges.
    pub fn empty(order: usize) -> Self {
        Graph { adjacency: vec![Vec::new(); order], size: 0 }
    }

    /// Builds a graph, dropping self-loops and repeated edges.
    ///
    /// Panics if an endpoint is `>= order`.
    pub fn from_edges<I>(order: usize, edges: I) -> (Self, EdgeCleanup)
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); order];
        let mut cleanup = EdgeCleanup::default();
        let mut attempted = 0usize;
        for (u, v) in edges {
            assert!(u < order && v < order, "edge ({u}, {v}) outside 0..{order}");
            if u == v {
                cleanup.self_loops += 1;
                continue;
            }
            attempted += 1;
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let degree_sum: usize = adjacency.iter().map(Vec::len).sum();
        let size = degree_sum / 2;
        cleanup.duplicates = attempted - size;
        (Graph { adjacency, size }, cleanup)
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Sorted neighbor ids of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().copied().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn mean_degree(&self) -> f64 {
        if self.order() == 0 {
            0.0
        } else {
            2.0 * self.size as f64 / self.order() as f64
        }
    }

    pub fn to_matrix(&self) -> AdjacencyMatrix {
        AdjacencyMatrix::from_graph(self)
    }
}

/// Result of [`remove_vertices`].
#[derive(Clone, Debug)]
pub struct VertexRemoval {
    pub graph: Graph,
    /// Removed vertex ids in the original labeling, ascending.
    pub removed: Vec<usize>,
    /// `survivors[new_id]` is the original id of each remaining vertex.
    pub survivors: Vec<usize>,
}

/// Deletes `floor(fraction * order)` uniformly chosen vertices and their edges.
///
/// Surviving vertices keep their relative order and are relabeled `0..`.
pub fn remove_vertices<R: Rng + ?Sized>(g: &Graph, fraction: f64, rng: &mut R) -> Result<VertexRemoval> {
    if !(0.0..1.0).contains(&fraction) {
        return Err(Error::invalid(format!("removal fraction {fraction} outside [0, 1)")));
    }
    let n = g.order();
    let count = (fraction * n as f64).floor() as usize;
    let mut removed = rand::seq::index::sample(rng, n, count).into_vec();
    removed.sort_unstable();

    let mut keep = vec![true; n];
    for &v in &removed {
        keep[v] = false;
    }
    let mut new_id = vec![usize::MAX; n];
    let mut survivors = Vec::with_capacity(n - count);
    for v in (0..n).filter(|&v| keep[v]) {
        new_id[v] = survivors.len();
        survivors.push(v);
    }
    let edges = g
        .edges()
        .filter(|&(u, v)| keep[u] && keep[v])
        .map(|(u, v)| (new_id[u], new_id[v]));
    let (graph, _) = Graph::from_edges(survivors.len(), edges);
    Ok(VertexRemoval { graph, removed, survivors })
}
