//! Generic reductions: single-source structures from single-pair ones via
//! sampled sinks and shortcut edges, and strongly connected components from
//! single-source reachability via random representatives.

use std::collections::BTreeMap;

use num::{BigRational, Zero};
use rand::Rng;

use crate::approx_sp::{ApproxSp, ApproxSpConfig};
use crate::error::Error;
use crate::es_tree::EsTree;
use crate::graph::{DecrementalGraph, GraphView, NodeId, NodeSet, Update, WeightTransform, INF};
use crate::sampling::{seeded_rng, SampleRng, SamplingConfig};
use crate::scale::{int, Eps, Scaler};
use crate::schedule::{schedule_multipair, ParamSchedule, Variant};
use crate::st_reach::{MultiPairReach, StReachConfig};

/// Samples sinks with probability a k ln(n Delta) / n, never the source.
pub fn sample_sinks(n: usize, s: NodeId, k: f64, delta_bound: u64, a: f64, rng: &mut SampleRng) -> Vec<NodeId> {
    let p = (a * k * ((n as f64) * delta_bound.max(2) as f64).ln() / n as f64).min(1.0);
    (0..n).filter(|&v| rng.gen::<f64>() < p && v != s).collect()
}

/// Merges a base edge and a shortcut edge between the same endpoints.
#[derive(Clone, Copy, Debug, Default)]
struct Merged {
    base: Option<u64>,
    shortcut: Option<u64>,
}

impl Merged {
    fn weight(&self) -> Option<u64> {
        match (self.base, self.shortcut) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

/// G': the base graph plus shortcut edges (s, t) for sampled sinks t.
/// Parallel base and shortcut edges are merged into one edge of minimum
/// weight.
#[derive(Clone, Debug)]
struct ShortcutGraph {
    g: DecrementalGraph,
    merged: BTreeMap<(NodeId, NodeId), Merged>,
}

impl ShortcutGraph {
    fn new(n: usize, base: &[(NodeId, NodeId, u64)], shortcuts: &[(NodeId, NodeId, u64)], cap: u64) -> Result<Self, Error> {
        let mut merged: BTreeMap<(NodeId, NodeId), Merged> = BTreeMap::new();
        for &(u, v, w) in base {
            merged.entry((u, v)).or_default().base = Some(w);
        }
        for &(u, v, w) in shortcuts {
            merged.entry((u, v)).or_default().shortcut = Some(w);
        }
        let edges: Vec<_> = merged.iter().map(|(&(u, v), m)| (u, v, m.weight().unwrap())).collect();
        let max_w = edges.iter().map(|e| e.2).max().unwrap_or(1);
        let g = DecrementalGraph::with_cap(n, &edges, max_w, cap.max(max_w))?;
        Ok(ShortcutGraph { g, merged })
    }

    /// Applies a change to one side of a merged edge and returns the update
    /// on G', if the merged weight changed.
    fn set(&mut self, u: NodeId, v: NodeId, shortcut: bool, w: Option<u64>) -> Result<Option<Update>, Error> {
        let m = self.merged.entry((u, v)).or_default();
        let before = m.weight();
        if shortcut {
            m.shortcut = w;
        } else {
            m.base = w;
        }
        let after = m.weight();
        Ok(match (before, after) {
            (Some(_), None) => Some(self.g.delete_edge(u, v)?),
            (Some(a), Some(b)) if b > a => Some(self.g.increase_weight(u, v, b)?),
            _ => None,
        })
    }
}

#[derive(Clone, Debug)]
pub struct SsrConfig {
    /// Target number of sinks k; the hop bound is n / k.
    pub k_sinks: f64,
    /// Schedule for the pair engine; derived from the sink count if absent.
    pub pair_schedule: Option<ParamSchedule>,
    pub sampling: SamplingConfig,
    pub seed: u64,
}

impl SsrConfig {
    pub fn new(k_sinks: f64, seed: u64) -> Self {
        SsrConfig { k_sinks, pair_schedule: None, sampling: SamplingConfig::default(), seed }
    }
}

/// Decremental single-source reachability from a multi-pair engine.
#[derive(Clone, Debug)]
pub struct SingleSourceReach {
    s: NodeId,
    sinks: Vec<NodeId>,
    shortcut_alive: Vec<bool>,
    h: u64,
    pairs: MultiPairReach,
    gp: ShortcutGraph,
    tree: EsTree,
}

impl SingleSourceReach {
    pub fn new(g: DecrementalGraph, s: NodeId, cfg: &SsrConfig) -> Result<Self, Error> {
        let n = g.n();
        if s >= n {
            return Err(Error::Param(format!("source {s} out of range")));
        }
        let mut rng = seeded_rng(cfg.seed);
        let delta = g.m_initial().max(2) as u64;
        let sinks = sample_sinks(n, s, cfg.k_sinks, delta, cfg.sampling.a, &mut rng);
        let h = ((n as f64 / cfg.k_sinks.max(1.0)).ceil() as u64).max(1);
        let schedule = match &cfg.pair_schedule {
            Some(s) => s.clone(),
            None => schedule_multipair(g.m_initial().max(1) as u64, n as u64, sinks.len().max(1) as f64, Variant::A)?,
        };
        let pair_list: Vec<_> = sinks.iter().map(|&t| (s, t)).collect();
        let base: Vec<_> = g.edge_list().into_iter().map(|(u, v, _)| (u, v, 1)).collect();
        let pcfg = StReachConfig { schedule, sampling: cfg.sampling, seed: rng.gen() };
        let pairs = MultiPairReach::new(g, &pair_list, &pcfg)?;
        let shortcut_alive: Vec<bool> = (0..sinks.len()).map(|j| pairs.reachable(j)).collect();
        let shortcuts: Vec<_> = sinks.iter().zip(&shortcut_alive).filter(|(_, &a)| a).map(|(&t, _)| (s, t, 1)).collect();
        let gp = ShortcutGraph::new(n, &base, &shortcuts, 1)?;
        // A shortcut counts as one hop, so depth h + 1 covers every node.
        let tree = EsTree::forward(&gp.g, s, h + 1);
        Ok(SingleSourceReach { s, sinks, shortcut_alive, h, pairs, gp, tree })
    }

    pub fn source(&self) -> NodeId {
        self.s
    }

    pub fn sinks(&self) -> &[NodeId] {
        &self.sinks
    }

    pub fn hop_bound(&self) -> u64 {
        self.h
    }

    pub fn graph(&self) -> &DecrementalGraph {
        self.pairs.graph()
    }

    pub fn pair_engine(&self) -> &MultiPairReach {
        &self.pairs
    }

    pub fn query(&self, v: NodeId) -> bool {
        self.tree.contains(v)
    }

    pub fn work(&self) -> u64 {
        self.pairs.work() + self.tree.work()
    }

    /// Deletes (u, v) and returns the nodes that just became unreachable,
    /// as reported by the hop tree.
    pub fn delete(&mut self, u: NodeId, v: NodeId) -> Result<Vec<NodeId>, Error> {
        self.pairs.delete(u, v)?;
        let mut dropped = Vec::new();
        if let Some(up) = self.gp.set(u, v, false, None)? {
            dropped.extend(self.tree.on_update(&self.gp.g, &up).dropped);
        }
        for j in 0..self.sinks.len() {
            if self.shortcut_alive[j] && !self.pairs.reachable(j) {
                self.shortcut_alive[j] = false;
                if let Some(up) = self.gp.set(self.s, self.sinks[j], true, None)? {
                    dropped.extend(self.tree.on_update(&self.gp.g, &up).dropped);
                }
            }
        }
        dropped.sort_unstable();
        Ok(dropped)
    }
}

#[derive(Clone, Debug)]
pub struct SsspConfig {
    pub k_sinks: f64,
    /// Target accuracy; rounding and the hop engine run with eps / 3.
    pub eps: Eps,
    /// Schedule for every s-t engine.
    pub pair_schedule: ParamSchedule,
    pub sampling: SamplingConfig,
    pub seed: u64,
}

/// Power code of a weight: c = ceil(log_{1+eps} w) + 1, meaning (1+eps)^(c-1).
pub fn power_code(w: &BigRational, eps: &Eps) -> u64 {
    eps.ceil_log(w) as u64 + 1
}

/// Decremental (1+eps) alpha-approximate single-source distances, with one
/// approximate s-t engine per sink (alpha = 1 + eps).
#[derive(Clone, Debug)]
pub struct SingleSourceSp {
    s: NodeId,
    eps: Eps,
    sinks: Vec<NodeId>,
    engines: Vec<ApproxSp>,
    codes: Vec<Option<u64>>,
    h: u64,
    g: DecrementalGraph,
    gp: ShortcutGraph,
    trees: Vec<(Scaler, EsTree)>,
}

impl SingleSourceSp {
    pub fn new(g: DecrementalGraph, s: NodeId, cfg: &SsspConfig) -> Result<Self, Error> {
        let n = g.n();
        if s >= n {
            return Err(Error::Param(format!("source {s} out of range")));
        }
        let eps = cfg.eps.divided(3);
        let mut rng = seeded_rng(cfg.seed);
        let delta = g.m_initial().max(2) as u64;
        let sinks = sample_sinks(n, s, cfg.k_sinks, delta, cfg.sampling.a, &mut rng);
        let h = ((n as f64 / cfg.k_sinks.max(1.0)).ceil() as u64).max(1);
        let mut engines = Vec::with_capacity(sinks.len());
        for &t in &sinks {
            let mut pc = ApproxSpConfig::new(cfg.pair_schedule.clone(), cfg.eps.clone(), rng.gen());
            pc.sampling = cfg.sampling;
            engines.push(ApproxSp::new(g.clone(), s, t, &pc)?);
        }
        let codes: Vec<Option<u64>> = engines.iter().map(|e| e.distance().map(|d| power_code(d, &eps))).collect();
        let base: Vec<_> = g.edge_list().into_iter().map(|(u, v, w)| (u, v, power_code(&int(w), &eps))).collect();
        let shortcuts: Vec<_> = sinks.iter().zip(&codes).filter_map(|(&t, c)| c.map(|c| (s, t, c))).collect();
        // Distances and estimates stay below n W (1+eps)^(2k+1) with room to spare.
        let cap = power_code(&(int(n as u64 * g.weight_cap()) * cfg.eps.pow(4 * cfg.pair_schedule.k as i64 + 4)), &eps);
        let gp = ShortcutGraph::new(n, &base, &shortcuts, cap)?;
        let r_top = cap as i64;
        let hops = int(h + 1);
        let trees = (0..=r_top)
            .map(|r| {
                let scaler = Scaler::hop_rounding(&eps, &hops, r);
                let depth = scaler.floor_units(&eps.pow(r + 2));
                let t = WeightTransform::PowerCode { eps: eps.clone(), scaler: scaler.clone() };
                let tree = EsTree::build(&gp.g.view().with_transform(t), s, depth);
                (scaler, tree)
            })
            .collect();
        Ok(SingleSourceSp { s, eps, sinks, engines, codes, h, g, gp, trees })
    }

    pub fn source(&self) -> NodeId {
        self.s
    }

    pub fn sinks(&self) -> &[NodeId] {
        &self.sinks
    }

    pub fn hop_bound(&self) -> u64 {
        self.h
    }

    pub fn graph(&self) -> &DecrementalGraph {
        &self.g
    }

    /// Accuracy of the rounding and the hop engine.
    pub fn internal_eps(&self) -> &Eps {
        &self.eps
    }

    pub fn engines(&self) -> &[ApproxSp] {
        &self.engines
    }

    /// Estimate for v: the minimum over ranges r of the scaled tree level.
    pub fn estimate(&self, v: NodeId) -> Option<BigRational> {
        if v == self.s {
            return Some(BigRational::zero());
        }
        self.trees.iter().filter_map(|(sc, t)| t.level(v).map(|l| sc.to_real(l))).min()
    }

    pub fn estimate_f64(&self, v: NodeId) -> f64 {
        use num::ToPrimitive;
        self.estimate(v).map_or(f64::INFINITY, |e| e.to_f64().unwrap_or(f64::INFINITY))
    }

    pub fn work(&self) -> u64 {
        self.engines.iter().map(|e| e.work()).sum::<u64>() + self.trees.iter().map(|(_, t)| t.work()).sum::<u64>()
    }

    pub fn delete(&mut self, u: NodeId, v: NodeId) -> Result<(), Error> {
        self.g.delete_edge(u, v)?;
        for e in &mut self.engines {
            e.delete(u, v)?;
        }
        let up = self.gp.set(u, v, false, None)?;
        self.sync(up)
    }

    pub fn increase(&mut self, u: NodeId, v: NodeId, w: u64) -> Result<(), Error> {
        self.g.increase_weight(u, v, w)?;
        for e in &mut self.engines {
            e.increase(u, v, w)?;
        }
        let code = power_code(&int(w), &self.eps);
        let up = self.gp.set(u, v, false, Some(code))?;
        self.sync(up)
    }

    fn push(&mut self, up: Update) {
        for (_, t) in &mut self.trees {
            t.on_update(&self.gp.g, &up);
        }
    }

    fn sync(&mut self, up: Option<Update>) -> Result<(), Error> {
        if let Some(up) = up {
            self.push(up);
        }
        for j in 0..self.sinks.len() {
            // Estimates never decrease; the running max keeps that explicit.
            let fresh = self.engines[j].distance().map(|d| power_code(d, &self.eps));
            let next = match (self.codes[j], fresh) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
            if next != self.codes[j] {
                self.codes[j] = next;
                if let Some(up) = self.gp.set(self.s, self.sinks[j], true, next)? {
                    self.push(up);
                }
            }
        }
        Ok(())
    }
}

/// Strongly connected components by Tarjan's algorithm, iteratively.
/// comp[v] is the smallest node id in v's component; nodes outside the
/// view's filter get usize::MAX.
pub fn tarjan_scc(view: &GraphView) -> Vec<NodeId> {
    let n = view.n();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut counter = 0;
    let succ = |v: NodeId| {
        let mut out = Vec::new();
        view.for_each_out(v, |_, u, _| out.push(u));
        out
    };
    for root in 0..n {
        if index[root] != usize::MAX || !view.contains(root) {
            continue;
        }
        let mut call: Vec<(NodeId, Vec<NodeId>, usize)> = vec![(root, succ(root), 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let u = frame.1[frame.2];
                frame.2 += 1;
                if index[u] == usize::MAX {
                    index[u] = counter;
                    low[u] = counter;
                    counter += 1;
                    stack.push(u);
                    on_stack[u] = true;
                    let su = succ(u);
                    call.push((u, su, 0));
                } else if on_stack[u] {
                    low[v] = low[v].min(index[u]);
                }
                continue;
            }
            call.pop();
            if let Some(parent) = call.last() {
                low[parent.0] = low[parent.0].min(low[v]);
            }
            if low[v] == index[v] {
                let mut members = Vec::new();
                loop {
                    let x = stack.pop().unwrap();
                    on_stack[x] = false;
                    members.push(x);
                    if x == v {
                        break;
                    }
                }
                let label = *members.iter().min().unwrap();
                for x in members {
                    comp[x] = label;
                }
            }
        }
    }
    comp
}

/// A decremental reachability engine that reports newly unreachable nodes.
pub trait ReachEngine {
    fn reaches(&self, v: NodeId) -> bool;
    /// Called after `up` has been applied to `g`.
    fn apply(&mut self, g: &DecrementalGraph, up: &Update) -> Result<Vec<NodeId>, Error>;
    fn work(&self) -> u64;
}

/// Full-depth ES-tree.
#[derive(Clone, Debug)]
pub struct EsEngine(EsTree);

impl ReachEngine for EsEngine {
    fn reaches(&self, v: NodeId) -> bool {
        self.0.contains(v)
    }

    fn apply(&mut self, g: &DecrementalGraph, up: &Update) -> Result<Vec<NodeId>, Error> {
        Ok(self.0.on_update(g, up).dropped)
    }

    fn work(&self) -> u64 {
        self.0.work()
    }
}

/// Hierarchical single-source reachability, on G or on its reverse.
#[derive(Clone, Debug)]
pub struct HierEngine {
    inner: SingleSourceReach,
    reversed: bool,
}

impl ReachEngine for HierEngine {
    fn reaches(&self, v: NodeId) -> bool {
        self.inner.query(v)
    }

    fn apply(&mut self, _g: &DecrementalGraph, up: &Update) -> Result<Vec<NodeId>, Error> {
        let (a, b) = if self.reversed { (up.to, up.from) } else { (up.from, up.to) };
        self.inner.delete(a, b)
    }

    fn work(&self) -> u64 {
        self.inner.work()
    }
}

#[derive(Clone, Debug)]
pub enum EngineKind {
    Es,
    Hierarchical { k_sinks: f64 },
}

fn build_engine(g: &DecrementalGraph, root: NodeId, reversed: bool, kind: &EngineKind, seed: u64) -> Result<Box<dyn ReachEngine>, Error> {
    Ok(match kind {
        EngineKind::Es => {
            let depth = g.n().max(1) as u64;
            let mut view = g.view().unit();
            if reversed {
                view = view.reversed();
            }
            Box::new(EsEngine(EsTree::build(&view, root, depth)))
        }
        EngineKind::Hierarchical { k_sinks } => {
            let edges: Vec<_> = g
                .edge_list()
                .into_iter()
                .map(|(u, v, _)| if reversed { (v, u, 1) } else { (u, v, 1) })
                .collect();
            let copy = DecrementalGraph::new(g.n(), &edges, 1)?;
            Box::new(HierEngine { inner: SingleSourceReach::new(copy, root, &SsrConfig::new(*k_sinks, seed))?, reversed })
        }
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SccStats {
    pub decompositions: u64,
    /// Node charges after a decomposition: every node outside the largest
    /// resulting piece is charged once.
    pub charges: u64,
    /// Charges to a piece larger than half the old component.
    pub halving_violations: u64,
    pub max_charges: u32,
    pub engines_built: u64,
}

/// Decremental strongly connected components.
pub struct Scc {
    g: DecrementalGraph,
    kind: EngineKind,
    rng: SampleRng,
    rep: Vec<NodeId>,
    members: BTreeMap<NodeId, Vec<NodeId>>,
    engines: BTreeMap<NodeId, (Box<dyn ReachEngine>, Box<dyn ReachEngine>)>,
    charges: Vec<u32>,
    stats: SccStats,
}

impl Scc {
    pub fn new(g: DecrementalGraph, kind: EngineKind, seed: u64) -> Result<Self, Error> {
        let n = g.n();
        let mut me = Scc {
            g,
            kind,
            rng: seeded_rng(seed),
            rep: vec![0; n],
            members: BTreeMap::new(),
            engines: BTreeMap::new(),
            charges: vec![0; n],
            stats: SccStats::default(),
        };
        let comp = tarjan_scc(&me.g.view());
        let mut groups: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for v in 0..n {
            groups.entry(comp[v]).or_default().push(v);
        }
        for (_, nodes) in groups {
            me.install(nodes)?;
        }
        Ok(me)
    }

    /// Gives a node group a uniformly random representative and, if the
    /// group can still split, its two engines.
    fn install(&mut self, nodes: Vec<NodeId>) -> Result<NodeId, Error> {
        let w = nodes[self.rng.gen_range(0..nodes.len())];
        for &v in &nodes {
            self.rep[v] = w;
        }
        if nodes.len() > 1 {
            let seed = self.rng.gen();
            let inn = build_engine(&self.g, w, true, &self.kind, seed)?;
            let out = build_engine(&self.g, w, false, &self.kind, seed ^ 1)?;
            self.engines.insert(w, (inn, out));
            self.stats.engines_built += 2;
        }
        self.members.insert(w, nodes);
        Ok(w)
    }

    pub fn graph(&self) -> &DecrementalGraph {
        &self.g
    }

    /// Component id of v: its representative.
    pub fn query(&self, v: NodeId) -> NodeId {
        self.rep[v]
    }

    pub fn component_count(&self) -> usize {
        self.members.len()
    }

    pub fn stats(&self) -> &SccStats {
        &self.stats
    }

    pub fn charges(&self) -> &[u32] {
        &self.charges
    }

    pub fn work(&self) -> u64 {
        self.engines.values().map(|(a, b)| a.work() + b.work()).sum()
    }

    /// Partition labelled by smallest member, comparable with the oracles.
    pub fn partition(&self) -> Vec<NodeId> {
        let mut out = vec![0; self.g.n()];
        for nodes in self.members.values() {
            let label = *nodes.iter().min().unwrap();
            for &v in nodes {
                out[v] = label;
            }
        }
        out
    }

    fn charge(&mut self, nodes: &[NodeId], old_size: usize) {
        let halved = 2 * nodes.len() <= old_size;
        for &x in nodes {
            self.charges[x] += 1;
            self.stats.max_charges = self.stats.max_charges.max(self.charges[x]);
            if halved {
                self.stats.charges += 1;
            } else {
                self.stats.halving_violations += 1;
            }
        }
    }

    pub fn delete(&mut self, u: NodeId, v: NodeId) -> Result<(), Error> {
        let up = self.g.delete_edge(u, v)?;
        let w = self.rep[u];
        let mut lost = Vec::new();
        for (&root, (inn, out)) in self.engines.iter_mut() {
            let a = inn.apply(&self.g, &up)?;
            let b = out.apply(&self.g, &up)?;
            if root == w && self.rep[v] == w {
                lost.extend(a);
                lost.extend(b);
            }
        }
        lost.retain(|&x| self.rep[x] == w);
        lost.sort_unstable();
        lost.dedup();
        if lost.is_empty() {
            return Ok(());
        }
        self.stats.decompositions += 1;
        let old_size = self.members[&w].len();
        let ab = NodeSet::from_nodes(self.g.n(), lost.iter().copied());
        let comp = tarjan_scc(&self.g.view().induced(&ab));
        let mut groups: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for &x in &lost {
            groups.entry(comp[x]).or_default().push(x);
        }
        let kept: Vec<NodeId> = self.members[&w].iter().copied().filter(|x| !ab.contains(*x)).collect();
        // Every piece but the largest is charged; w's piece wins ties.
        let largest = groups.values().map(Vec::len).max().unwrap_or(0);
        let mut spare = if kept.len() >= largest { None } else { groups.iter().find(|(_, g)| g.len() == largest).map(|(&k, _)| k) };
        if !kept.is_empty() && spare.is_some() {
            self.charge(&kept, old_size);
        }
        let still_splittable = kept.len() > 1;
        self.members.insert(w, kept);
        if !still_splittable {
            self.engines.remove(&w);
        }
        for (key, nodes) in groups {
            if spare == Some(key) {
                spare = None;
            } else {
                self.charge(&nodes, old_size);
            }
            self.install(nodes)?;
        }
        Ok(())
    }
}

/// ceil(log2 n), the per-node charge bound.
pub fn charge_bound(n: usize) -> u32 {
    (n.max(2) as f64).log2().ceil() as u32
}

/// Reachability sets from the oracle, for tests and replay.
pub fn oracle_reach(g: &DecrementalGraph, s: NodeId) -> Vec<bool> {
    crate::oracle::bfs_dist(&g.view(), s).into_iter().map(|d| d != INF).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn tarjan_small_cases() {
        let dag = DecrementalGraph::new(3, &[(0, 1, 1), (1, 2, 1)], 1).unwrap();
        assert_eq!(tarjan_scc(&dag.view()), vec![0, 1, 2]);
        let tri = DecrementalGraph::new(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)], 1).unwrap();
        assert_eq!(tarjan_scc(&tri.view()), vec![0, 0, 0]);
        let g = DecrementalGraph::new(5, &[(0, 1, 1), (1, 2, 1), (0, 2, 3), (2, 3, 1), (3, 1, 1)], 3).unwrap();
        assert_eq!(tarjan_scc(&g.view()), oracle::scc_partition(&g.view()));
    }

    #[test]
    fn cycle_splits_into_singletons() {
        let g = DecrementalGraph::new(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)], 1).unwrap();
        let mut scc = Scc::new(g, EngineKind::Es, 3).unwrap();
        assert_eq!(scc.component_count(), 1);
        scc.delete(2, 3).unwrap();
        assert_eq!(scc.partition(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn representative_uniform_on_triangle() {
        let mut hits = [0u32; 3];
        for seed in 0..300 {
            let tri = DecrementalGraph::new(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)], 1).unwrap();
            hits[Scc::new(tri, EngineKind::Es, seed).unwrap().query(0)] += 1;
        }
        assert!(hits.iter().all(|&h| (70..=130).contains(&h)), "{hits:?}");
    }

    #[test]
    fn ssr_on_path() {
        let edges: Vec<_> = (0..9).map(|i| (i, i + 1, 1)).collect();
        let g = DecrementalGraph::new(10, &edges, 1).unwrap();
        let mut ssr = SingleSourceReach::new(g, 0, &SsrConfig::new(2.0, 5)).unwrap();
        assert!((0..10).all(|v| ssr.query(v)));
        let dropped = ssr.delete(4, 5).unwrap();
        assert_eq!(dropped, vec![5, 6, 7, 8, 9]);
        assert!((0..10).all(|v| ssr.query(v) == (v <= 4)));
    }

    #[test]
    fn merged_edge_survives_one_side() {
        let mut sg = ShortcutGraph::new(2, &[(0, 1, 3)], &[(0, 1, 2)], 10).unwrap();
        assert_eq!(sg.g.weight(0, 1), Some(2));
        assert!(sg.set(0, 1, true, None).unwrap().is_some());
        assert_eq!(sg.g.weight(0, 1), Some(3));
        assert!(sg.set(0, 1, false, None).unwrap().is_some());
        assert!(!sg.g.has_edge(0, 1));
    }
}
