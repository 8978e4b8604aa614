use serde::Serialize;

use super::Graph;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphStats {
    pub order: usize,
    pub size: usize,
    pub density: f64,
    pub mean_degree: f64,
    pub transitivity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

/// Order, size, density, mean degree and global transitivity.
pub fn graph_stats(g: &Graph) -> GraphStats {
    let n = g.order();
    let m = g.size();
    let density = if n > 1 { 2.0 * m as f64 / (n as f64 * (n - 1) as f64) } else { 0.0 };
    let triples: u64 = g.degrees().iter().map(|&d| (d as u64 * d.saturating_sub(1) as u64) / 2).sum();
    let transitivity = if triples == 0 { 0.0 } else { 3.0 * triangle_count(g) as f64 / triples as f64 };
    GraphStats { order: n, size: m, density, mean_degree: g.mean_degree(), transitivity, gamma: None }
}

/// Number of triangles, each counted once.
pub fn triangle_count(g: &Graph) -> u64 {
    let mut count = 0u64;
    for u in 0..g.order() {
        let nu = g.neighbors(u);
        let start = nu.partition_point(|&x| x <= u);
        for &v in &nu[start..] {
            // count w > v adjacent to both u and v
            let nv = g.neighbors(v);
            let a = &nu[nu.partition_point(|&x| x <= v)..];
            let b = &nv[nv.partition_point(|&x| x <= v)..];
            count += sorted_intersection_len(a, b);
        }
    }
    count
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> u64 {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Exponential fit to the degree CCDF.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FragilityFit {
    pub gamma: f64,
    pub intercept: f64,
    /// Smallest and largest degree used in the fit.
    pub k_range: (usize, usize),
}

/// Fits `ln CCDF(k) = a - k / gamma` by least squares.
///
/// `CCDF(k)` is the fraction of vertices with degree at least `k`, evaluated for
/// every `k >= 1` where it is positive.
pub fn gamma_fragility(g: &Graph) -> Result<FragilityFit> {
    let degrees = g.degrees();
    let mut positive: Vec<usize> = degrees.iter().copied().filter(|&d| d > 0).collect();
    positive.sort_unstable();
    positive.dedup();
    if positive.len() < 2 {
        return Err(Error::degenerate("fragility fit needs at least two distinct positive degrees"));
    }
    let k_max = *positive.last().unwrap();
    let mut at_least = vec![0usize; k_max + 2];
    for &d in &degrees {
        at_least[d] += 1;
    }
    for k in (0..=k_max).rev() {
        at_least[k] += at_least[k + 1];
    }
    let n = g.order() as f64;
    let points: Vec<(f64, f64)> = (1..=k_max).map(|k| (k as f64, at_least[k] as f64 / n)).collect();
    let (gamma, intercept) = gamma_from_ccdf(&points)?;
    Ok(FragilityFit { gamma, intercept, k_range: (1, k_max) })
}

/// Least-squares `(gamma, intercept)` for points `(k, ccdf)` with `ccdf > 0`.
pub fn gamma_from_ccdf(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::degenerate("fragility fit needs at least two points"));
    }
    if points.iter().any(|&(_, c)| c.is_nan() || c <= 0.0) {
        return Err(Error::degenerate("CCDF values must be positive"));
    }
    let n = points.len() as f64;
    let mean_k = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_k).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_k) * (p.1.ln() - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::degenerate("all fit points share one degree"));
    }
    let slope = sxy / sxx;
    if slope.is_nan() || slope >= 0.0 {
        return Err(Error::degenerate("CCDF does not decay"));
    }
    Ok((-1.0 / slope, mean_y - slope * mean_k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    #[test]
    fn triangle_stats() {
        let s = graph_stats(&complete(3));
        assert_eq!((s.density, s.mean_degree, s.transitivity), (1.0, 2.0, 1.0));
    }

    #[test]
    fn star_stats() {
        let s = graph_stats(&star(3));
        assert_eq!(s.transitivity, 0.0);
        assert_eq!(s.mean_degree, 1.5);
    }

    #[test]
    fn complete_graphs_are_fully_transitive() {
        for n in 3..9 {
            let g = complete(n);
            assert_eq!(triangle_count(&g), (n * (n - 1) * (n - 2) / 6) as u64);
            assert_eq!(graph_stats(&g).transitivity, 1.0);
        }
    }

    #[test]
    fn exact_exponential_ccdf() {
        let points: Vec<_> = (1..=12).map(|k| (k as f64, (-(k as f64) / 2.0).exp())).collect();
        let (gamma, intercept) = gamma_from_ccdf(&points).unwrap();
        assert!((gamma - 2.0).abs() < 1e-12);
        assert!(intercept.abs() < 1e-12);
    }

    #[test]
    fn two_point_degree_sequence() {
        // path a-b-c-d has degrees {1, 2, 2, 1}: CCDF(1) = 1, CCDF(2) = 1/2
        let fit = gamma_fragility(&path(4)).unwrap();
        let slope = (0.5f64.ln() - 1.0f64.ln()) / (2.0 - 1.0);
        assert!((fit.gamma - (-1.0 / slope)).abs() < 1e-12);
        assert_eq!(fit.k_range, (1, 2));
    }

    #[test]
    fn single_degree_is_degenerate() {
        assert!(gamma_fragility(&complete(4)).is_err());
        assert!(gamma_fragility(&Graph::empty(3)).is_err());
    }

    fn brute_triangles(g: &Graph) -> u64 {
        let n = g.order();
        let mut t = 0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                        t += 1;
                    }
                }
            }
        }
        t
    }

    proptest! {
        #[test]
        fn stats_bounds(n in 1usize..25, edges in proptest::collection::vec((0usize..25, 0usize..25), 0..120)) {
            let edges: Vec<_> = edges.into_iter().map(|(u, v)| (u % n, v % n)).collect();
            let (g, _) = Graph::from_edges(n, edges);
            let s = graph_stats(&g);
            prop_assert!((0.0..=1.0).contains(&s.density));
            prop_assert!((0.0..=1.0).contains(&s.transitivity));
            prop_assert_eq!(triangle_count(&g), brute_triangles(&g));
            if n > 1 {
                prop_assert!((s.density - s.mean_degree / (n - 1) as f64).abs() < 1e-12);
            }
        }

        #[test]
        fn trees_have_zero_transitivity(parents in proptest::collection::vec(any::<prop::sample::Index>(), 1..40)) {
            let n = parents.len() + 1;
            let edges = parents.iter().enumerate().map(|(i, p)| (i + 1, p.index(i + 1)));
            let (g, _) = Graph::from_edges(n, edges);
            prop_assert_eq!(g.size(), n - 1);
            prop_assert_eq!(graph_stats(&g).transitivity, 0.0);
        }
    }
}
