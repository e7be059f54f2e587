//! Random hitting sets, hubs and center hierarchies.
//!
//! All randomness flows through [`seeded_rng`], a ChaCha8 stream, so a seed
//! reproduces the same sets on every platform. Nested families are built
//! from one uniform draw per node (and per edge) shared by all levels: an
//! element joins level i iff its draw is below p_i.

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::graph::{DecrementalGraph, NodeId, NodeSet};

pub type SampleRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug)]
pub struct SamplingConfig {
    /// The constant a in all sampling probabilities.
    pub a: f64,
    /// Abort instead of warning when a sample exceeds three times its expectation.
    pub strict: bool,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { a: 2.0, strict: false }
    }
}

fn check_size(what: &str, size: usize, expected: f64, cfg: &SamplingConfig) -> Result<bool, Error> {
    if expected >= 1.0 && size as f64 > 3.0 * expected {
        let msg = format!("{what}: size {size} exceeds 3 x expected {expected:.1}");
        if cfg.strict {
            return Err(Error::OversizedSample(msg));
        }
        warn!("sampling failure: {msg}");
        return Ok(true);
    }
    Ok(false)
}

/// x = a ln(k t) + 1 and the inclusion probability min(x / q, 1).
pub fn hitting_probability(t: usize, q: usize, k: usize, a: f64) -> (f64, f64) {
    let x = a * ((k * t) as f64).ln() + 1.0;
    (x, (x / q as f64).min(1.0))
}

/// Samples each of 0..t independently so that, with high probability, every
/// one of k fixed subsets of size at least q is hit and |U| <= 3 x t / q.
pub fn sample_hitting_set(t: usize, q: usize, k: usize, a: f64, rng: &mut SampleRng) -> Vec<usize> {
    let (_, p) = hitting_probability(t, q, k, a);
    (0..t).filter(|_| rng.gen::<f64>() < p).collect()
}

/// One shared uniform draw per node and per edge id.
#[derive(Clone, Debug)]
pub struct CoupledDraws {
    pub node: Vec<f64>,
    pub edge: Vec<f64>,
}

impl CoupledDraws {
    pub fn new(n: usize, m: usize, rng: &mut SampleRng) -> Self {
        let node = (0..n).map(|_| rng.gen::<f64>()).collect();
        let edge = (0..m).map(|_| rng.gen::<f64>()).collect();
        CoupledDraws { node, edge }
    }
}

fn ln_delta(delta_bound: u64) -> f64 {
    (delta_bound.max(2) as f64).ln()
}

/// Hub set for target b: nodes drawn with probability a b ln(Delta) / n plus
/// both endpoints of edges drawn with probability a b ln(Delta) / m.
/// Sorted by node id.
pub fn build_hubs(
    g: &DecrementalGraph,
    b: u64,
    delta_bound: u64,
    draws: &CoupledDraws,
    cfg: &SamplingConfig,
    warnings: &mut u32,
) -> Result<Vec<NodeId>, Error> {
    let n = g.n();
    let m = g.m_initial().max(1);
    let base = cfg.a * b as f64 * ln_delta(delta_bound);
    let pn = (base / n as f64).min(1.0);
    let pe = (base / m as f64).min(1.0);
    let mut set = NodeSet::empty(n);
    for v in 0..n {
        if draws.node[v] < pn {
            set.insert(v);
        }
    }
    for (e, ed) in g.alive_edges() {
        if draws.edge[e] < pe {
            set.insert(ed.from);
            set.insert(ed.to);
        }
    }
    let expected = n as f64 * pn + 2.0 * g.m_alive() as f64 * pe;
    *warnings += check_size("hub set", set.len(), expected, cfg)? as u32;
    Ok(set.to_vec())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HubLevels {
    /// levels[i - 1] = B_i, sorted by node id.
    pub levels: Vec<Vec<NodeId>>,
    /// Number of oversized samples that were accepted with a warning.
    pub warnings: u32,
}

/// Nested hub levels for b_1 >= b_2 >= ... >= b_k.
pub fn build_hub_levels(
    g: &DecrementalGraph,
    b: &[u64],
    delta_bound: u64,
    rng: &mut SampleRng,
    cfg: &SamplingConfig,
) -> Result<HubLevels, Error> {
    let draws = CoupledDraws::new(g.n(), g.m_initial(), rng);
    let mut warnings = 0;
    let levels = b
        .iter()
        .map(|&bi| build_hubs(g, bi, delta_bound, &draws, cfg, &mut warnings))
        .collect::<Result<_, _>>()?;
    Ok(HubLevels { levels, warnings })
}

/// C_0 = V superset of C_1 ... superset of C_{k+1} = terminals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterHierarchy {
    sets: Vec<NodeSet>,
    /// Number of oversized levels that were accepted with a warning.
    pub warnings: u32,
}

impl CenterHierarchy {
    pub fn k(&self) -> usize {
        self.sets.len() - 2
    }

    /// C_i for 0 <= i <= k+1.
    pub fn level(&self, i: usize) -> &NodeSet {
        &self.sets[i]
    }

    pub fn is_nested(&self) -> bool {
        self.sets.windows(2).all(|w| w[1].is_subset(&w[0]))
    }

    /// Adds nodes to C_1..C_level, keeping the family nested.
    pub fn add_to_levels(&mut self, level: usize, nodes: &[NodeId]) {
        for i in 1..=level {
            for &v in nodes {
                self.sets[i].insert(v);
            }
        }
    }

    /// Largest i <= k with v in C_i (0 for non-centers).
    pub fn top_level(&self, v: NodeId) -> usize {
        (0..=self.k()).rev().find(|&i| self.sets[i].contains(v)).unwrap_or(0)
    }
}

/// Samples C_i with probability a c_i ln(Delta) / n from shared draws and
/// unions in C_{i+1}. `c` holds c_1..c_k.
pub fn build_centers(
    n: usize,
    c: &[u64],
    terminals: &[NodeId],
    delta_bound: u64,
    rng: &mut SampleRng,
    cfg: &SamplingConfig,
) -> Result<CenterHierarchy, Error> {
    let k = c.len();
    let draws: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let mut sets = vec![NodeSet::empty(n); k + 2];
    let mut warnings = 0;
    sets[0] = NodeSet::full(n);
    sets[k + 1] = NodeSet::from_nodes(n, terminals.iter().copied());
    for i in (1..=k).rev() {
        let p = (cfg.a * c[i - 1] as f64 * ln_delta(delta_bound) / n as f64).min(1.0);
        let mut s = sets[i + 1].clone();
        for v in 0..n {
            if draws[v] < p {
                s.insert(v);
            }
        }
        warnings += check_size(&format!("center level {i}"), s.len(), n as f64 * p + terminals.len() as f64, cfg)? as u32;
        sets[i] = s;
    }
    Ok(CenterHierarchy { sets, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_stream() {
        let a = sample_hitting_set(100, 10, 5, 2.0, &mut seeded_rng(7));
        let b = sample_hitting_set(100, 10, 5, 2.0, &mut seeded_rng(7));
        assert_eq!(a, b);
    }

    #[test]
    fn full_universe_when_q_small() {
        let u = sample_hitting_set(50, 3, 4, 2.0, &mut seeded_rng(1));
        assert_eq!(u.len(), 50);
    }

    #[test]
    fn expected_size_within_five_percent() {
        let (_, p) = hitting_probability(1000, 100, 10, 2.0);
        let total: usize = (0..1000u64).map(|s| sample_hitting_set(1000, 100, 10, 2.0, &mut seeded_rng(s)).len()).sum();
        let mean = total as f64 / 1000.0;
        assert!((mean - p * 1000.0).abs() < 0.05 * p * 1000.0, "mean {mean}");
    }

    #[test]
    fn nested_hubs_and_centers() {
        let edges: Vec<_> = (0..30).map(|i| (i, (i * 7 + 1) % 30, 1)).filter(|e| e.0 != e.1).collect();
        let g = DecrementalGraph::new(30, &edges, 1).unwrap();
        let cfg = SamplingConfig::default();
        let hubs = build_hub_levels(&g, &[4, 2, 1], 30, &mut seeded_rng(3), &cfg).unwrap();
        for w in hubs.levels.windows(2) {
            assert!(w[1].iter().all(|v| w[0].contains(v)));
        }
        let full = build_hub_levels(&g, &[30], 30, &mut seeded_rng(3), &cfg).unwrap();
        assert_eq!(full.levels[0].len(), 30);
        let c = build_centers(30, &[6, 3, 1], &[0, 29], 30, &mut seeded_rng(4), &cfg).unwrap();
        assert!(c.is_nested());
        for i in 0..=4 {
            assert!(c.level(i).contains(0) && c.level(i).contains(29));
        }
        assert_eq!(c.level(0).len(), 30);
        let all = build_centers(30, &[30], &[0, 1], 30, &mut seeded_rng(4), &cfg).unwrap();
        assert_eq!(all.level(1).len(), 30);
    }

    #[test]
    fn strict_mode_aborts() {
        let cfg = SamplingConfig { a: 2.0, strict: true };
        assert!(check_size("x", 100, 10.0, &cfg).is_err());
        assert!(!check_size("x", 20, 10.0, &cfg).unwrap());
    }
}
