//! Pairwise reachability among terminals of a dense graph via a center graph.
//!
//! Centers C_1 >= ... >= C_k are sampled and the terminals are added to C_1.
//! A center's level is the largest i with the center in C_i, and a pair
//! (x, y) lives at level l = max(lev x, lev y). At level k, x is linked to y
//! when the depth-h_k ES-tree of the k-center reaches the other end. Below
//! that, a pair is linked while some (l+1)-center z has x linked to z and z
//! linked to y. Once no such z is left the pair computes Q from the
//! approximate path union of x and keeps a depth-h_l ES-tree from x in
//! G[Q]; from then on that tree alone decides the link. The linked 1-center
//! pairs form the center graph, in which reachability answers queries.

use std::collections::BTreeMap;

use crate::approx_path_union::ApproxPathUnion;
use crate::error::Error;
use crate::es_tree::EsTree;
use crate::graph::{DecrementalGraph, NodeId, NodeSet, INF};
use crate::oracle;
use crate::sampling::{build_centers, seeded_rng, CenterHierarchy, SamplingConfig};
use crate::schedule::ParamSchedule;

#[derive(Clone, Debug)]
pub struct DenseConfig {
    pub schedule: ParamSchedule,
    pub sampling: SamplingConfig,
    pub seed: u64,
}

/// Largest terminal count the dense analysis admits: n^(4/3) / m^(1/3).
pub fn terminal_bound(n: usize, m: usize) -> f64 {
    (n as f64).powf(4.0 / 3.0) / (m.max(1) as f64).powf(1.0 / 3.0)
}

#[derive(Clone, Debug)]
enum Link {
    /// Decided by the k-center trees.
    Top,
    /// Certifying (l+1)-centers, as indices into the center list.
    Certified(Vec<usize>),
    /// Authoritative tree from x inside G[Q].
    Tree(Box<EsTree>),
}

#[derive(Clone, Debug)]
struct PairLink {
    level: usize,
    link: Link,
    linked: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DenseStats {
    pub q_computed: u64,
    /// Computed Q's with at most n / c_{l+1} nodes.
    pub q_within_bound: u64,
    pub max_q: usize,
    pub certifier_losses: u64,
    /// A pair went from unlinked to linked. Must stay zero.
    pub monotonicity_violations: u64,
    pub center_edges_removed: u64,
    pub sampling_warnings: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinkReport {
    pub checked: u64,
    /// Linked but unreachable.
    pub unsound: u64,
    /// Within h_l but not linked.
    pub incomplete: u64,
}

#[derive(Clone, Debug)]
pub struct DenseSsr {
    g: DecrementalGraph,
    sched: ParamSchedule,
    k: usize,
    terminals: Vec<NodeId>,
    centers: CenterHierarchy,
    /// The 1-centers in increasing order; all indices below refer to it.
    list: Vec<NodeId>,
    index: Vec<usize>,
    lev: Vec<usize>,
    h: Vec<u64>,
    out_trees: BTreeMap<usize, EsTree>,
    in_trees: BTreeMap<usize, EsTree>,
    pairs: Vec<PairLink>,
    apus: BTreeMap<(NodeId, usize), ApproxPathUnion>,
    cg: DecrementalGraph,
    cg_trees: Vec<EsTree>,
    stats: DenseStats,
}

impl DenseSsr {
    pub fn new(g: DecrementalGraph, terminals: &[NodeId], cfg: &DenseConfig) -> Result<Self, Error> {
        let n = g.n();
        if let Some(&bad) = terminals.iter().find(|&&v| v >= n) {
            return Err(Error::Param(format!("terminal {bad} out of range")));
        }
        let bound = terminal_bound(n, g.m_initial());
        if cfg.sampling.strict && terminals.len() as f64 > bound {
            return Err(Error::Param(format!("{} terminals exceed the admissible {bound:.1}", terminals.len())));
        }
        let sched = cfg.schedule.clone();
        let k = sched.k;
        let mut rng = seeded_rng(cfg.seed);
        let mut centers = build_centers(n, &sched.c[1..=k], &[], n as u64, &mut rng, &cfg.sampling)?;
        centers.add_to_levels(1, terminals);
        let list = centers.level(1).to_vec();
        let mut index = vec![usize::MAX; n];
        for (i, &v) in list.iter().enumerate() {
            index[v] = i;
        }
        let lev: Vec<usize> = list.iter().map(|&v| centers.top_level(v)).collect();
        let h: Vec<u64> = (0..=k).map(|i| if i == 0 { 0 } else { sched.h_dense(i) }).collect();
        let mut out_trees = BTreeMap::new();
        let mut in_trees = BTreeMap::new();
        for (i, &v) in list.iter().enumerate() {
            if lev[i] == k {
                out_trees.insert(i, EsTree::forward(&g, v, h[k]));
                in_trees.insert(i, EsTree::backward(&g, v, h[k]));
            }
        }
        let c = list.len();
        let pairs = (0..c * c)
            .map(|p| {
                let level = lev[p / c].max(lev[p % c]);
                let link = if level == k { Link::Top } else { Link::Certified(Vec::new()) };
                PairLink { level, link, linked: false }
            })
            .collect();
        let stats = DenseStats { sampling_warnings: centers.warnings, ..Default::default() };
        let mut me = DenseSsr {
            g,
            sched,
            k,
            terminals: terminals.to_vec(),
            centers,
            list,
            index,
            lev,
            h,
            out_trees,
            in_trees,
            pairs,
            apus: BTreeMap::new(),
            cg: DecrementalGraph::new(0, &[], 1)?,
            cg_trees: Vec::new(),
            stats,
        };
        me.initial_links();
        let mut edges = Vec::new();
        for a in 0..c {
            for b in 0..c {
                if a != b && me.pairs[a * c + b].linked {
                    edges.push((a, b, 1));
                }
            }
        }
        me.cg = DecrementalGraph::new(c, &edges, 1)?;
        me.cg_trees = (0..c).map(|a| EsTree::forward(&me.cg, a, c.max(1) as u64)).collect();
        Ok(me)
    }

    fn top_linked(&self, a: usize, b: usize) -> bool {
        let y = self.list[b];
        if self.lev[a] == self.k {
            self.out_trees[&a].contains(y)
        } else {
            self.in_trees[&b].contains(self.list[a])
        }
    }

    fn initial_links(&mut self) {
        let c = self.list.len();
        for l in (1..=self.k).rev() {
            for a in 0..c {
                for b in 0..c {
                    let p = a * c + b;
                    if a == b || self.pairs[p].level != l {
                        continue;
                    }
                    if l == self.k {
                        self.pairs[p].linked = self.top_linked(a, b);
                        continue;
                    }
                    let certs: Vec<usize> = (0..c)
                        .filter(|&z| self.lev[z] > l && self.pairs[a * c + z].linked && self.pairs[z * c + b].linked)
                        .collect();
                    if certs.is_empty() {
                        self.switch_to_tree(a, b);
                    } else {
                        self.pairs[p].link = Link::Certified(certs);
                        self.pairs[p].linked = true;
                    }
                }
            }
        }
    }

    fn switch_to_tree(&mut self, a: usize, b: usize) {
        let c = self.list.len();
        let p = a * c + b;
        let l = self.pairs[p].level;
        let (x, y) = (self.list[a], self.list[b]);
        let h = self.h[l];
        let apu = self.apus.entry((x, l)).or_insert_with(|| ApproxPathUnion::new(&self.g, x, h));
        let q: NodeSet = apu.query(&self.g, y);
        self.stats.q_computed += 1;
        self.stats.max_q = self.stats.max_q.max(q.len());
        if q.len() as u64 * self.sched.c(l + 1) <= self.g.n() as u64 {
            self.stats.q_within_bound += 1;
        }
        let tree = EsTree::build(&self.g.view().unit().induced(&q), x, h);
        self.pairs[p].linked = tree.contains(y);
        self.pairs[p].link = Link::Tree(Box::new(tree));
    }

    pub fn graph(&self) -> &DecrementalGraph {
        &self.g
    }

    pub fn schedule(&self) -> &ParamSchedule {
        &self.sched
    }

    pub fn centers(&self) -> &CenterHierarchy {
        &self.centers
    }

    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    pub fn center_count(&self) -> usize {
        self.list.len()
    }

    pub fn stats(&self) -> &DenseStats {
        &self.stats
    }

    pub fn work(&self) -> u64 {
        let trees: u64 = self.out_trees.values().chain(self.in_trees.values()).map(|t| t.work()).sum();
        let pair_trees: u64 = self
            .pairs
            .iter()
            .map(|p| if let Link::Tree(t) = &p.link { t.work() } else { 0 })
            .sum();
        let apu: u64 = self.apus.values().map(|a| a.ledger().work).sum();
        let cg: u64 = self.cg_trees.iter().map(|t| t.work()).sum();
        trees + pair_trees + apu + cg
    }

    /// Is x linked to y? Both must be 1-centers.
    pub fn linked(&self, x: NodeId, y: NodeId) -> Option<bool> {
        let (a, b) = (*self.index.get(x)?, *self.index.get(y)?);
        if a == usize::MAX || b == usize::MAX {
            return None;
        }
        Some(a == b || self.pairs[a * self.list.len() + b].linked)
    }

    /// Does x reach y? Both must be terminals (any 1-centers work).
    pub fn query(&self, x: NodeId, y: NodeId) -> Result<bool, Error> {
        let idx = |v: NodeId| match self.index.get(v) {
            Some(&i) if i != usize::MAX => Ok(i),
            _ => Err(Error::Param(format!("{v} is not a terminal"))),
        };
        let (a, b) = (idx(x)?, idx(y)?);
        Ok(self.cg_trees[a].contains(b))
    }

    pub fn delete(&mut self, u: NodeId, v: NodeId) -> Result<(), Error> {
        let up = self.g.delete_edge(u, v)?;
        for t in self.out_trees.values_mut().chain(self.in_trees.values_mut()) {
            t.on_update(&self.g, &up);
        }
        let c = self.list.len();
        let before: Vec<bool> = self.pairs.iter().map(|p| p.linked).collect();
        let mut lost = Vec::new();
        for l in (1..=self.k).rev() {
            for p in 0..c * c {
                let (a, b) = (p / c, p % c);
                if a == b || self.pairs[p].level != l || !self.pairs[p].linked {
                    continue;
                }
                let now = match &mut self.pairs[p].link {
                    Link::Top => None,
                    Link::Tree(t) => {
                        t.on_update(&self.g, &up);
                        Some(t.contains(self.list[b]))
                    }
                    Link::Certified(_) => Some(true),
                };
                let now = match now {
                    None => self.top_linked(a, b),
                    Some(x) => x,
                };
                if let Link::Certified(certs) = &self.pairs[p].link {
                    let pairs = &self.pairs;
                    let kept: Vec<usize> =
                        certs.iter().copied().filter(|&z| pairs[a * c + z].linked && pairs[z * c + b].linked).collect();
                    if kept.is_empty() {
                        self.stats.certifier_losses += 1;
                        self.switch_to_tree(a, b);
                    } else {
                        self.pairs[p].link = Link::Certified(kept);
                    }
                } else {
                    self.pairs[p].linked = now;
                }
                if !self.pairs[p].linked {
                    lost.push((a, b));
                }
            }
        }
        self.stats.monotonicity_violations +=
            before.iter().zip(&self.pairs).filter(|(&was, p)| !was && p.linked).count() as u64;
        for (a, b) in lost {
            if self.cg.has_edge(a, b) {
                let cup = self.cg.delete_edge(a, b)?;
                self.stats.center_edges_removed += 1;
                for t in &mut self.cg_trees {
                    t.on_update(&self.cg, &cup);
                }
            }
        }
        Ok(())
    }

    /// Linked implies reachable, and dist <= h_l implies linked, checked
    /// with BFS over all center pairs.
    pub fn check_links(&self) -> LinkReport {
        let c = self.list.len();
        let view = self.g.view();
        let mut rep = LinkReport::default();
        for a in 0..c {
            let d = oracle::bfs_dist(&view, self.list[a]);
            for b in 0..c {
                if a == b {
                    continue;
                }
                let p = &self.pairs[a * c + b];
                let dist = d[self.list[b]];
                rep.checked += 1;
                if p.linked && dist == INF {
                    rep.unsound += 1;
                }
                if !p.linked && dist <= self.h[p.level] {
                    rep.incomplete += 1;
                }
            }
        }
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: u64, m: u64) -> DenseConfig {
        DenseConfig { schedule: ParamSchedule::pinned(n, m, &[1, 1], &[2, 1]).unwrap(), sampling: SamplingConfig::default(), seed: 4 }
    }

    #[test]
    fn path_three() {
        let g = DecrementalGraph::new(3, &[(0, 1, 1), (1, 2, 1)], 1).unwrap();
        let mut d = DenseSsr::new(g, &[0, 2], &cfg(3, 2)).unwrap();
        assert!(d.query(0, 2).unwrap());
        assert!(!d.query(2, 0).unwrap());
        assert!(d.query(0, 0).unwrap());
        d.delete(0, 1).unwrap();
        assert!(!d.query(0, 2).unwrap());
    }

    #[test]
    fn unknown_terminal() {
        let g = DecrementalGraph::new(40, &[(0, 1, 1)], 1).unwrap();
        let d = DenseSsr::new(g, &[0, 1], &cfg(40, 1)).unwrap();
        if d.linked(5, 0).is_none() {
            assert!(d.query(5, 0).is_err());
        }
    }
}
