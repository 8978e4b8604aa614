use std::collections::BTreeMap;

use netboot::{configuration_model, polylog_graph, sample_degree_sequence, DegreeDistribution, StreamKey};

// All perfect matchings of `stubs`, as lists of index pairs.
fn matchings(stubs: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if stubs.is_empty() {
        return vec![Vec::new()];
    }
    let first = stubs[0];
    let mut out = Vec::new();
    for i in 1..stubs.len() {
        let rest: Vec<usize> = stubs[1..].iter().enumerate().filter(|&(j, _)| j + 1 != i).map(|(_, &s)| s).collect();
        for mut m in matchings(&rest) {
            m.push((first, stubs[i]));
            out.push(m);
        }
    }
    out
}

// Edge set left after erasing loops and repeats, for each pairing of the stubs.
fn erased_outcomes(degrees: &[usize]) -> BTreeMap<Vec<(usize, usize)>, f64> {
    let owner: Vec<usize> = degrees.iter().enumerate().flat_map(|(v, &d)| std::iter::repeat_n(v, d)).collect();
    let all = matchings(&(0..owner.len()).collect::<Vec<_>>());
    let total = all.len() as f64;
    let mut counts = BTreeMap::new();
    for m in all {
        let mut edges: Vec<(usize, usize)> = m
            .iter()
            .map(|&(a, b)| (owner[a].min(owner[b]), owner[a].max(owner[b])))
            .filter(|(u, v)| u != v)
            .collect();
        edges.sort_unstable();
        edges.dedup();
        *counts.entry(edges).or_insert(0.0) += 1.0 / total;
    }
    counts
}

#[test]
fn three_twos_match_pairing_enumeration() {
    let oracle = erased_outcomes(&[2, 2, 2]);
    // 15 pairings: 8 give the triangle, 2 each of the three single edges, 1 nothing
    assert_eq!(oracle.len(), 5);
    assert!((oracle[&vec![(0, 1)]] - 2.0 / 15.0).abs() < 1e-12);
    assert!((oracle[&vec![(0, 1), (0, 2), (1, 2)]] - 8.0 / 15.0).abs() < 1e-12);
    assert!((oracle[&Vec::new()] - 1.0 / 15.0).abs() < 1e-12);

    let runs = 60_000;
    let mut rng = StreamKey::new(3).rng();
    let mut seen: BTreeMap<Vec<(usize, usize)>, f64> = BTreeMap::new();
    for _ in 0..runs {
        let (g, _) = configuration_model(&[2, 2, 2], &mut rng).unwrap();
        *seen.entry(g.edges().collect()).or_insert(0.0) += 1.0 / runs as f64;
    }
    for (edges, p) in &oracle {
        let q = seen.get(edges).copied().unwrap_or(0.0);
        let sigma = (p * (1.0 - p) / runs as f64).sqrt();
        assert!((p - q).abs() < 4.0 * sigma, "{edges:?}: {q} vs {p}");
    }
    assert_eq!(seen.len(), oracle.len());
}

#[test]
fn mixed_sequence_matches_pairing_enumeration() {
    let degrees = [3, 1, 2, 2];
    let oracle = erased_outcomes(&degrees);
    let runs = 60_000;
    let mut rng = StreamKey::new(4).rng();
    let mut seen: BTreeMap<Vec<(usize, usize)>, f64> = BTreeMap::new();
    for _ in 0..runs {
        let (g, _) = configuration_model(&degrees, &mut rng).unwrap();
        *seen.entry(g.edges().collect()).or_insert(0.0) += 1.0 / runs as f64;
    }
    for (edges, p) in &oracle {
        let q = seen.get(edges).copied().unwrap_or(0.0);
        let sigma = (p * (1.0 - p) / runs as f64).sqrt();
        assert!((p - q).abs() < 4.0 * sigma + 1e-12, "{edges:?}: {q} vs {p}");
    }
}

#[test]
fn million_draws_average_to_the_distribution_mean() {
    let d = DegreeDistribution::polylog(0.001, 2.13).unwrap();
    let seq = sample_degree_sequence(&d, 1_000_000, &mut StreamKey::new(5).rng()).unwrap();
    let mean = seq.iter().sum::<usize>() as f64 / seq.len() as f64;
    assert!((mean - d.mean()).abs() < 0.01, "{mean}");
    assert!((mean - 2.67).abs() < 0.01 + 0.005, "{mean}");
}

#[test]
fn erasure_loss_is_small_for_thousands_of_vertices() {
    for (delta, lambda) in [(0.001, 2.13), (0.987, 5.0)] {
        let d = DegreeDistribution::polylog(delta, lambda).unwrap();
        for (n, seed) in [(1000, 6), (5000, 7)] {
            let mut rng = StreamKey::new(seed).rng();
            let degrees = sample_degree_sequence(&d, n, &mut rng).unwrap();
            let requested: usize = degrees.iter().sum();
            let (g, _) = configuration_model(&degrees, &mut rng).unwrap();
            let loss = (requested - 2 * g.size()) as f64 / requested as f64;
            assert!(loss < 0.05, "polylog({delta}, {lambda}) n={n}: loss {loss}");
        }
    }
}

#[test]
fn realized_mean_degree_at_five_thousand() {
    for (delta, lambda) in [(0.001, 2.13), (0.987, 5.0)] {
        let d = DegreeDistribution::polylog(delta, lambda).unwrap();
        let g = polylog_graph(&d, 5000, &mut StreamKey::new(8).rng()).unwrap();
        let rel = (g.mean_degree() - d.mean()).abs() / d.mean();
        assert!(rel < 0.02, "polylog({delta}, {lambda}): {} vs {}", g.mean_degree(), d.mean());
        assert_eq!(g.order(), 5000);
    }
}
