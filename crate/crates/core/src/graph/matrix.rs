use crate::error::{Error, Result};

use super::Graph;

/// Dense binary adjacency matrix with a zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    n: usize,
    entries: Vec<u8>,
    directed: bool,
}

impl AdjacencyMatrix {
    pub fn zeros(n: usize, directed: bool) -> Self {
        AdjacencyMatrix { n, entries: vec![0; n * n], directed }
    }

    /// Builds a matrix from row-major 0/1 entries, clearing the diagonal.
    ///
    /// Returns the matrix and the number of diagonal ones that were cleared.
    /// Undirected matrices must be symmetric.
    pub fn from_entries(n: usize, mut entries: Vec<u8>, directed: bool) -> Result<(Self, usize)> {
        if entries.len() != n * n {
            return Err(Error::NonSquare { tokens: entries.len() });
        }
        if let Some(position) = entries.iter().position(|&e| e > 1) {
            return Err(Error::NonBinary { position, token: entries[position].to_string() });
        }
        let mut cleared = 0;
        for i in 0..n {
            if entries[i * n + i] != 0 {
                entries[i * n + i] = 0;
                cleared += 1;
            }
        }
        if !directed {
            for i in 0..n {
                for j in i + 1..n {
                    if entries[i * n + j] != entries[j * n + i] {
                        return Err(Error::Asymmetric { row: i, col: j });
                    }
                }
            }
        }
        Ok((AdjacencyMatrix { n, entries, directed }, cleared))
    }

    pub fn from_graph(g: &Graph) -> Self {
        let n = g.order();
        let mut m = AdjacencyMatrix::zeros(n, false);
        for (u, v) in g.edges() {
            m.entries[u * n + v] = 1;
            m.entries[v * n + u] = 1;
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.entries[row * self.n + col]
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize, value: u8) {
        self.entries[row * self.n + col] = value;
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Number of nonzero entries; each undirected edge counts twice.
    pub fn ones(&self) -> usize {
        self.entries.iter().map(|&e| e as usize).sum()
    }

    /// Arcs over ordered pairs; for symmetric input this equals edges over unordered pairs.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.ones() as f64 / (self.n * (self.n - 1)) as f64
    }

    /// Mean in-degree for directed matrices, mean degree otherwise.
    pub fn mean_degree(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.ones() as f64 / self.n as f64
    }

    /// Converts a symmetric matrix back to a [`Graph`].
    pub fn to_graph(&self) -> Result<Graph> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.get(i, j) != self.get(j, i) {
                    return Err(Error::Asymmetric { row: i, col: j });
                }
            }
        }
        let n = self.n;
        let edges = (0..n).flat_map(|i| (i + 1..n).filter(move |&j| self.get(i, j) == 1).map(move |j| (i, j)));
        Ok(Graph::from_edges(n, edges).0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    #[test]
    fn triangle_roundtrip() {
        let g = complete(3);
        let m = g.to_matrix();
        assert_eq!(m.entries(), &[0, 1, 1, 1, 0, 1, 1, 1, 0]);
        assert_eq!(m.to_graph().unwrap(), g);
    }

    #[test]
    fn empty_roundtrip() {
        let g = Graph::empty(4);
        let m = g.to_matrix();
        assert_eq!(m.ones(), 0);
        assert_eq!(m.to_graph().unwrap(), g);
    }

    #[test]
    fn diagonal_is_cleared() {
        let (m, cleared) = AdjacencyMatrix::from_entries(2, vec![1, 1, 1, 1], false).unwrap();
        assert_eq!(cleared, 2);
        assert_eq!(m.entries(), &[0, 1, 1, 0]);
    }

    #[test]
    fn undirected_requires_symmetry() {
        let err = AdjacencyMatrix::from_entries(2, vec![0, 1, 0, 0], false).unwrap_err();
        assert!(matches!(err, Error::Asymmetric { row: 0, col: 1 }));
        let (m, _) = AdjacencyMatrix::from_entries(2, vec![0, 1, 0, 0], true).unwrap();
        assert!(m.to_graph().is_err());
        assert_eq!(m.density(), 0.5);
        assert_eq!(m.mean_degree(), 0.5);
    }

    proptest! {
        #[test]
        fn graph_matrix_roundtrip(n in 0usize..20, edges in proptest::collection::vec((0usize..20, 0usize..20), 0..80)) {
            let edges: Vec<_> = edges.into_iter().filter(|&(u, v)| u < n && v < n).collect();
            let (g, _) = Graph::from_edges(n, edges);
            let m = g.to_matrix();
            prop_assert!(m.is_symmetric());
            prop_assert_eq!(m.ones(), 2 * g.size());
            prop_assert_eq!(m.to_graph().unwrap(), g);
        }
    }
}
