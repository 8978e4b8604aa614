//! Labeled snowball sampling with multiple inclusions.
//!
//! A snowball is grown around each seed by following edges that have not been
//! used yet. A vertex is included once per unused edge that reaches it, so it
//! can appear several times and in several waves. Every inclusion records the
//! vertex degree, which is all the estimators downstream need.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// One appearance of a vertex in a snowball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inclusion {
    pub id: usize,
    pub degree: usize,
    /// The wave-(w-1) vertex whose edge led here.
    #[serde(skip)]
    pub via: Option<usize>,
}

/// Snowball around a single seed. `waves[w - 1]` holds wave `w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lsmi {
    pub seed: usize,
    pub seed_degree: usize,
    pub waves: Vec<Vec<Inclusion>>,
}

impl Lsmi {
    /// Copy restricted to the first `n_wave` waves.
    pub fn truncated(&self, n_wave: usize) -> Lsmi {
        Lsmi { seed: self.seed, seed_degree: self.seed_degree, waves: self.waves[..n_wave.min(self.waves.len())].to_vec() }
    }

    pub fn inclusions(&self) -> impl Iterator<Item = &Inclusion> {
        self.waves.iter().flatten()
    }
}

/// Snowballs grown independently around distinct seeds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Patch {
    pub n_seed: usize,
    pub n_wave: usize,
    pub lsmis: Vec<Lsmi>,
}

impl Patch {
    pub fn seeds(&self) -> Vec<usize> {
        self.lsmis.iter().map(|l| l.seed).collect()
    }

    pub fn seed_degrees(&self) -> Vec<usize> {
        self.lsmis.iter().map(|l| l.seed_degree).collect()
    }

    /// Degrees of all non-seed inclusions, with multiplicity.
    pub fn nonseed_degrees(&self) -> Vec<usize> {
        self.lsmis.iter().flat_map(|l| l.inclusions().map(|i| i.degree)).collect()
    }

    /// Distinct vertices anywhere in the patch, with their recorded degrees,
    /// in ascending id order.
    pub fn distinct_vertices(&self) -> Vec<(usize, usize)> {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for l in &self.lsmis {
            seen.insert(l.seed, l.seed_degree);
            for inc in l.inclusions() {
                seen.insert(inc.id, inc.degree);
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// Checks structural consistency of a patch read from outside.
    pub fn validate(&self) -> Result<()> {
        if self.lsmis.len() != self.n_seed {
            return Err(Error::invalid(format!("patch declares {} seeds but holds {}", self.n_seed, self.lsmis.len())));
        }
        let mut seeds = HashSet::new();
        for l in &self.lsmis {
            if !seeds.insert(l.seed) {
                return Err(Error::invalid(format!("seed {} appears twice", l.seed)));
            }
            if l.waves.len() > self.n_wave {
                return Err(Error::invalid(format!("seed {} has {} waves, patch declares {}", l.seed, l.waves.len(), self.n_wave)));
            }
            if l.inclusions().any(|i| i.degree == 0) {
                return Err(Error::invalid("non-seed inclusion with degree 0"));
            }
        }
        Ok(())
    }
}

/// `n_seed` distinct vertices, uniformly without replacement.
pub fn sample_seeds<R: Rng + ?Sized>(g: &Graph, n_seed: usize, rng: &mut R) -> Result<Vec<usize>> {
    if n_seed == 0 || n_seed > g.order() {
        return Err(Error::invalid(format!("cannot sample {n_seed} seeds from {} vertices", g.order())));
    }
    Ok(rand::seq::index::sample(rng, g.order(), n_seed).into_vec())
}

/// Grows the snowball around `seed` for `n_wave` waves.
///
/// Within a wave, inclusions are expanded in the order they were added and
/// each one walks its incident edges by ascending neighbor id. An edge is
/// used at most once, so an edge between two vertices of the same wave adds
/// one inclusion of the endpoint that is reached second.
pub fn grow_lsmi(g: &Graph, seed: usize, n_wave: usize) -> Result<Lsmi> {
    if seed >= g.order() {
        return Err(Error::invalid(format!("seed {seed} is not a vertex (order {})", g.order())));
    }
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    let mut waves = Vec::with_capacity(n_wave);
    let mut frontier = vec![seed];
    for _ in 0..n_wave {
        let mut next = Vec::new();
        for &v in &frontier {
            for &u in g.neighbors(v) {
                if used.insert((v.min(u), v.max(u))) {
                    next.push(Inclusion { id: u, degree: g.degree(u), via: Some(v) });
                }
            }
        }
        frontier = next.iter().map(|i| i.id).collect();
        waves.push(next);
    }
    Ok(Lsmi { seed, seed_degree: g.degree(seed), waves })
}

/// How seeds for a patch are chosen.
#[derive(Clone, Debug)]
pub enum Seeds {
    Random(usize),
    Explicit(Vec<usize>),
}

/// Patch of snowballs grown around each seed. Explicit seeds consume no
/// randomness.
pub fn lsmi<R: Rng + ?Sized>(g: &Graph, seeds: Seeds, n_wave: usize, rng: &mut R) -> Result<Patch> {
    let seeds = match seeds {
        Seeds::Random(n) => sample_seeds(g, n, rng)?,
        Seeds::Explicit(s) => {
            let distinct: HashSet<_> = s.iter().collect();
            if s.is_empty() || distinct.len() != s.len() {
                return Err(Error::invalid("explicit seeds must be nonempty and distinct"));
            }
            s
        }
    };
    patch_from_seeds(g, &seeds, n_wave)
}

fn patch_from_seeds(g: &Graph, seeds: &[usize], n_wave: usize) -> Result<Patch> {
    let lsmis = seeds.par_iter().map(|&s| grow_lsmi(g, s, n_wave)).collect::<Result<Vec<_>>>()?;
    Ok(Patch { n_seed: seeds.len(), n_wave, lsmis })
}

/// One big patch plus nested seed subsets for smaller seed counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeedNest {
    pub big_patch: Patch,
    /// Requested seed counts, largest first.
    pub seed_counts: Vec<usize>,
    /// `seed_subsets[i]` holds `seed_counts[i]` seeds, in big-patch order.
    pub seed_subsets: Vec<Vec<usize>>,
}

impl SeedNest {
    /// The patch for `(n_seed, n_wave)`, cut from the big patch without
    /// touching the graph.
    pub fn patch_view(&self, n_seed: usize, n_wave: usize) -> Result<Patch> {
        let idx = self
            .seed_counts
            .iter()
            .position(|&c| c == n_seed)
            .ok_or_else(|| Error::invalid(format!("{n_seed} seeds is not in the sampled grid {:?}", self.seed_counts)))?;
        if n_wave == 0 || n_wave > self.big_patch.n_wave {
            return Err(Error::invalid(format!("wave {n_wave} outside 1..={}", self.big_patch.n_wave)));
        }
        let subset: HashSet<usize> = self.seed_subsets[idx].iter().copied().collect();
        let lsmis = self
            .big_patch
            .lsmis
            .iter()
            .filter(|l| subset.contains(&l.seed))
            .map(|l| l.truncated(n_wave))
            .collect();
        Ok(Patch { n_seed, n_wave, lsmis })
    }
}

/// Samples `max(n_seeds)` seeds once, grows them to `n_wave`, and draws the
/// smaller seed sets by subsampling the next larger one.
pub fn lsmi_union<R: Rng + ?Sized>(g: &Graph, n_seeds: &[usize], n_wave: usize, rng: &mut R) -> Result<SeedNest> {
    if n_seeds.is_empty() {
        return Err(Error::invalid("seed-count grid is empty"));
    }
    if n_wave == 0 {
        return Err(Error::invalid("lsmi_union needs at least one wave"));
    }
    let mut counts = n_seeds.to_vec();
    counts.sort_unstable_by(|a, b| b.cmp(a));
    counts.dedup();
    let big = sample_seeds(g, counts[0], rng)?;
    let big_patch = patch_from_seeds(g, &big, n_wave)?;

    let mut seed_subsets: Vec<Vec<usize>> = vec![big.clone()];
    for &c in &counts[1..] {
        let parent = seed_subsets.last().unwrap();
        let mut picked = rand::seq::index::sample(rng, parent.len(), c).into_vec();
        picked.sort_unstable();
        let subset = picked.into_iter().map(|i| parent[i]).collect();
        seed_subsets.push(subset);
    }
    Ok(SeedNest { big_patch, seed_counts: counts, seed_subsets })
}
