use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::Serialize;

use super::{AdjacencyMatrix, EdgeCleanup, Graph};
use crate::error::{Error, Result};

/// A graph read from an edge-list file.
#[derive(Clone, Debug)]
pub struct EdgeList {
    pub graph: Graph,
    /// `original_ids[v]` is the id vertex `v` carried in the file.
    pub original_ids: Vec<u64>,
    pub cleanup: EdgeCleanup,
}

/// Reads a whitespace-separated edge list.
///
/// Blank lines and lines starting with `#` are ignored. Vertex ids are remapped
/// to `0..n` in order of first appearance. Self-loops and repeated edges are
/// dropped and counted; a self-loop still registers its vertex.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<EdgeList> {
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut original_ids = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |id: u64| {
        *index.entry(id).or_insert_with(|| {
            original_ids.push(id);
            original_ids.len() - 1
        })
    };
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected two vertex ids, found {} tokens", tokens.len()),
            });
        }
        let parse = |tok: &str| {
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno + 1,
                message: format!("`{tok}` is not a non-negative integer"),
            })
        };
        let (u, v) = (parse(tokens[0])?, parse(tokens[1])?);
        edges.push((intern(u), intern(v)));
    }
    let (graph, cleanup) = Graph::from_edges(original_ids.len(), edges);
    Ok(EdgeList { graph, original_ids, cleanup })
}

/// Writes one `u v` line per edge (`u < v`, lexicographic).
///
/// Isolated vertices are written as `v v` so that the vertex count survives a
/// reload; the loader registers the vertex and drops the self-loop.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    for v in (0..g.order()).filter(|&v| g.degree(v) == 0) {
        writeln!(out, "{v} {v}")?;
    }
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixLoad {
    #[serde(skip)]
    pub matrix: AdjacencyMatrix,
    pub diagonal_cleared: usize,
}

/// Reads a whitespace-separated 0/1 matrix in row-major order.
///
/// The first `skip_lines` lines are discarded (header lines of UCINET-style
/// files). The remaining token count must be a perfect square.
pub fn load_adjacency_matrix<R: BufRead>(reader: R, skip_lines: usize, directed: bool) -> Result<MatrixLoad> {
    let mut entries = Vec::new();
    for line in reader.lines().skip(skip_lines) {
        for token in line?.split_whitespace() {
            let value = match token {
                "0" | "0.0" => 0,
                "1" | "1.0" => 1,
                _ => return Err(Error::NonBinary { position: entries.len(), token: token.to_string() }),
            };
            entries.push(value);
        }
    }
    let n = (entries.len() as f64).sqrt().round() as usize;
    if n * n != entries.len() {
        return Err(Error::NonSquare { tokens: entries.len() });
    }
    let (matrix, diagonal_cleared) = AdjacencyMatrix::from_entries(n, entries, directed)?;
    Ok(MatrixLoad { matrix, diagonal_cleared })
}
