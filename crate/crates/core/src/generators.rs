//! Polylogarithmic degree laws and erased configuration-model graphs.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeCleanup, Graph};

/// Mass allowed beyond the truncation degree.
const TAIL_MASS: f64 = 1e-12;

/// A degree law on `k >= 1`, truncated where the remaining tail is negligible.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeDistribution {
    /// `pmf[k]` is the probability of degree `k`; `pmf[0]` is always zero.
    pmf: Vec<f64>,
    cdf: Vec<f64>,
    pub delta: Option<f64>,
    pub lambda: Option<f64>,
}

impl DegreeDistribution {
    /// Polylogarithmic law `pmf(k) ∝ k^(-delta) * exp(-k / lambda)`.
    ///
    /// Truncated at the smallest `k_max` whose cumulative mass reaches
    /// `1 - 1e-12`; the stored probabilities are not renormalized after
    /// truncation.
    pub fn polylog(delta: f64, lambda: f64) -> Result<Self> {
        if !delta.is_finite() || !lambda.is_finite() {
            return Err(Error::invalid("polylog parameters must be finite"));
        }
        if delta < 0.0 || lambda <= 0.0 {
            return Err(Error::invalid(format!("polylog needs delta >= 0 and lambda > 0, got ({delta}, {lambda})")));
        }
        let term = |k: f64| (-delta * k.ln() - k / lambda).exp();
        let ratio = (-1.0 / lambda).exp();
        // Terms decrease in k, so the tail after k is below term(k) * ratio / (1 - ratio).
        let mut terms = vec![0.0];
        let mut total = 0.0;
        let mut k = 1.0;
        loop {
            let t = term(k);
            terms.push(t);
            total += t;
            if t * ratio / (1.0 - ratio) < 1e-17 * total {
                break;
            }
            k += 1.0;
        }
        let mut pmf = vec![0.0];
        let mut cumulative = 0.0;
        for &t in &terms[1..] {
            let p = t / total;
            pmf.push(p);
            cumulative += p;
            if cumulative >= 1.0 - TAIL_MASS {
                break;
            }
        }
        let mut dist = Self::from_pmf(pmf)?;
        dist.delta = Some(delta);
        dist.lambda = Some(lambda);
        Ok(dist)
    }

    /// Arbitrary law from `pmf[k]`, `k = 0..`. Mass at `k = 0` is rejected.
    pub fn from_pmf(pmf: Vec<f64>) -> Result<Self> {
        if pmf.is_empty() || pmf[0] != 0.0 {
            return Err(Error::invalid("degree law must put zero mass on degree 0"));
        }
        if pmf.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::invalid("probabilities must be finite and non-negative"));
        }
        let mut cdf = Vec::with_capacity(pmf.len());
        let mut acc = 0.0;
        for p in &pmf {
            acc += p;
            cdf.push(acc);
        }
        if acc.is_nan() || acc <= 0.0 || acc > 1.0 + 1e-9 {
            return Err(Error::invalid(format!("probabilities sum to {acc}")));
        }
        Ok(DegreeDistribution { pmf, cdf, delta: None, lambda: None })
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn k_max(&self) -> usize {
        self.pmf.len() - 1
    }

    pub fn total_mass(&self) -> f64 {
        *self.cdf.last().unwrap()
    }

    pub fn mean(&self) -> f64 {
        self.pmf.iter().enumerate().map(|(k, p)| k as f64 * p).sum::<f64>() / self.total_mass()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.pmf.iter().enumerate().map(|(k, p)| (k as f64 - mean).powi(2) * p).sum::<f64>() / self.total_mass()
    }

    /// One inverse-CDF draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.random::<f64>() * self.total_mass();
        self.cdf.partition_point(|&c| c <= u).min(self.k_max())
    }

    fn support_parities(&self) -> (bool, bool) {
        let odd = self.pmf.iter().enumerate().any(|(k, &p)| p > 0.0 && k % 2 == 1);
        let even = self.pmf.iter().enumerate().any(|(k, &p)| p > 0.0 && k % 2 == 0);
        (odd, even)
    }
}

/// Draws `n` degrees; if their sum is odd, one uniformly chosen entry is
/// redrawn until the sum is even.
pub fn sample_degree_sequence<R: Rng + ?Sized>(dist: &DegreeDistribution, n: usize, rng: &mut R) -> Result<Vec<usize>> {
    if n < 2 {
        return Err(Error::invalid("degree sequence needs at least two vertices"));
    }
    let mut degrees: Vec<usize> = (0..n).map(|_| dist.sample(rng)).collect();
    let sum: usize = degrees.iter().sum();
    if sum % 2 == 1 {
        let (odd, even) = dist.support_parities();
        if !(odd && even) {
            return Err(Error::invalid("every degree in the support is odd, so an odd count can never sum to an even total"));
        }
        let i = rng.random_range(0..n);
        let old = degrees[i];
        loop {
            let d = dist.sample(rng);
            if (d + old) % 2 == 1 {
                degrees[i] = d;
                break;
            }
        }
    }
    Ok(degrees)
}

/// Erased configuration model: stubs are paired uniformly at random and
/// self-loops and repeated edges are discarded.
pub fn configuration_model<R: Rng + ?Sized>(degrees: &[usize], rng: &mut R) -> Result<(Graph, EdgeCleanup)> {
    let total: usize = degrees.iter().sum();
    if total % 2 == 1 {
        return Err(Error::invalid(format!("stub count {total} is odd")));
    }
    let mut stubs: Vec<usize> = Vec::with_capacity(total);
    for (v, &d) in degrees.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(v, d));
    }
    stubs.shuffle(rng);
    let pairs = stubs.chunks_exact(2).map(|p| (p[0], p[1]));
    Ok(Graph::from_edges(degrees.len(), pairs))
}

/// Samples a degree sequence of length `n` and wires it.
pub fn polylog_graph<R: Rng + ?Sized>(dist: &DegreeDistribution, n: usize, rng: &mut R) -> Result<Graph> {
    let degrees = sample_degree_sequence(dist, n, rng)?;
    Ok(configuration_model(&degrees, rng)?.0)
}
