//! Decremental s-t reachability through a hierarchy of hubs and centers,
//! for one or several (s, t) pairs sharing the same hubs and centers.
//!
//! Every active pair (x, y, i) of i-centers either has an i-hub z with
//! dist(x, z) <= 2 h_i and dist(z, y) <= 2 h_i, or owns a node set
//! Q(x, y, i) = P(x, y, 2 h_i) in which a path of at most h_i hops is kept
//! as a chain of (i-1)-center pairs. Level-0 pairs are single edges.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use crate::error::Error;
use crate::es_tree::EsTree;
use crate::graph::{DecrementalGraph, NodeId, NodeSet};
use crate::path_union::{path_union, shortest_path};
use crate::sampling::{build_centers, build_hub_levels, seeded_rng, CenterHierarchy, SamplingConfig};
use crate::schedule::ParamSchedule;

/// (level, x, y)
pub type PairKey = (usize, NodeId, NodeId);

/// Bound on how many children of one refresh may share a node.
pub const CHILD_OVERLAP_BOUND: usize = 8;

#[derive(Clone, Debug)]
pub struct StReachConfig {
    pub schedule: ParamSchedule,
    pub sampling: SamplingConfig,
    pub seed: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureStats {
    pub refreshes: u64,
    pub path_unions: u64,
    pub parent_refreshes_caused: u64,
    /// A pair that already caused a parent refresh caused another one.
    pub causation_violations: u64,
    pub max_child_overlap: usize,
    pub overlap_violations: u64,
    pub max_parents: usize,
    pub parent_violations: u64,
    /// A freshly computed child set was not inside its wiring parent's set.
    pub subset_violations: u64,
    pub q_within_edge_bound: u64,
    pub q_computed: u64,
    pub search_work: u64,
    pub sampling_warnings: u32,
}

#[derive(Clone, Debug, Default)]
struct PairState {
    q: Option<NodeSet>,
    parents: Vec<(NodeId, NodeId)>,
    children: Vec<(NodeId, NodeId)>,
    links: BTreeSet<usize>,
    links_tracked: bool,
    dead: bool,
    gen: u64,
}

#[derive(Clone, Debug)]
struct HubLevel {
    hubs: Vec<NodeId>,
    out_trees: Vec<EsTree>,
    in_trees: Vec<EsTree>,
}

#[derive(Clone, Debug)]
struct Instance {
    s: NodeId,
    t: NodeId,
    pairs: BTreeMap<PairKey, PairState>,
    reachable: bool,
    queue: VecDeque<PairKey>,
    pending: HashMap<PairKey, u64>,
}

#[derive(Clone, Debug)]
pub struct MultiPairReach {
    g: DecrementalGraph,
    sched: ParamSchedule,
    k: usize,
    centers: CenterHierarchy,
    hub_levels: Vec<HubLevel>,
    instances: Vec<Instance>,
    stats: StructureStats,
}

impl MultiPairReach {
    pub fn new(g: DecrementalGraph, pairs: &[(NodeId, NodeId)], cfg: &StReachConfig) -> Result<Self, Error> {
        let n = g.n();
        for &(s, t) in pairs {
            if s >= n || t >= n {
                return Err(Error::Param(format!("pair ({s}, {t}) out of range")));
            }
        }
        let sched = cfg.schedule.clone();
        let k = sched.k;
        let delta = g.m_initial().max(2) as u64;
        let mut rng = seeded_rng(cfg.seed);
        let terminals: Vec<NodeId> = pairs.iter().flat_map(|&(s, t)| [s, t]).collect();
        let centers = build_centers(n, &sched.c[1..=k], &terminals, delta, &mut rng, &cfg.sampling)?;
        let hub_sets = build_hub_levels(&g, &sched.b[1..=k], delta, &mut rng, &cfg.sampling)?;
        let sampling_warnings = centers.warnings + hub_sets.warnings;
        let hub_levels = hub_sets
            .levels
            .into_iter()
            .enumerate()
            .map(|(idx, hubs)| {
                let depth = sched.hops_within(idx + 1, 2);
                let out_trees = hubs.iter().map(|&z| EsTree::forward(&g, z, depth)).collect();
                let in_trees = hubs.iter().map(|&z| EsTree::backward(&g, z, depth)).collect();
                HubLevel { hubs, out_trees, in_trees }
            })
            .collect();
        let instances = pairs
            .iter()
            .map(|&(s, t)| Instance {
                s,
                t,
                pairs: BTreeMap::new(),
                reachable: true,
                queue: VecDeque::new(),
                pending: HashMap::new(),
            })
            .collect();
        let stats = StructureStats { sampling_warnings, ..Default::default() };
        let mut me = MultiPairReach { g, sched, k, centers, hub_levels, instances, stats };
        for j in 0..me.instances.len() {
            let (s, t) = (me.instances[j].s, me.instances[j].t);
            let top = (k + 1, s, t);
            me.instances[j].pairs.insert(top, PairState::default());
            if s == t {
                continue;
            }
            me.refresh(j, top);
            me.drain(j);
        }
        Ok(me)
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

    pub fn hubs(&self, i: usize) -> &[NodeId] {
        &self.hub_levels[i - 1].hubs
    }

    pub fn stats(&self) -> &StructureStats {
        &self.stats
    }

    pub fn pair_count(&self) -> usize {
        self.instances.len()
    }

    pub fn terminals(&self, j: usize) -> (NodeId, NodeId) {
        (self.instances[j].s, self.instances[j].t)
    }

    /// Maintained answer for pair j.
    pub fn reachable(&self, j: usize) -> bool {
        self.instances[j].reachable
    }

    /// Total work: hub trees plus searches inside path unions.
    pub fn work(&self) -> u64 {
        let trees: u64 = self
            .hub_levels
            .iter()
            .flat_map(|l| l.out_trees.iter().chain(l.in_trees.iter()))
            .map(|t| t.work())
            .sum();
        trees + self.stats.search_work
    }

    /// Number of active pairs per level 0..=k+1 for pair j.
    pub fn active_counts(&self, j: usize) -> Vec<usize> {
        let mut out = vec![0; self.k + 2];
        for (&(i, _, _), st) in &self.instances[j].pairs {
            if i == self.k + 1 || !st.parents.is_empty() {
                out[i] += 1;
            }
        }
        out
    }

    pub fn delete(&mut self, u: NodeId, v: NodeId) -> Result<(), Error> {
        let up = self.g.delete_edge(u, v)?;
        let mut in_drops: HashSet<(usize, usize, NodeId)> = HashSet::new();
        let mut out_drops: HashSet<(usize, usize, NodeId)> = HashSet::new();
        for (li, level) in self.hub_levels.iter_mut().enumerate() {
            for (z, t) in level.out_trees.iter_mut().enumerate() {
                for d in t.on_update(&self.g, &up).dropped {
                    out_drops.insert((li + 1, z, d));
                }
            }
            for (z, t) in level.in_trees.iter_mut().enumerate() {
                for d in t.on_update(&self.g, &up).dropped {
                    in_drops.insert((li + 1, z, d));
                }
            }
        }
        for j in 0..self.instances.len() {
            if !self.instances[j].reachable {
                continue;
            }
            // Pairs that lose their last hub link, with their generation.
            let mut lost = Vec::new();
            if !in_drops.is_empty() || !out_drops.is_empty() {
                for (&(i, x, y), st) in self.instances[j].pairs.iter_mut() {
                    if i == 0 || i > self.k || !st.links_tracked || st.links.is_empty() {
                        continue;
                    }
                    st.links.retain(|&z| !in_drops.contains(&(i, z, x)) && !out_drops.contains(&(i, z, y)));
                    if st.links.is_empty() {
                        lost.push(((i, x, y), st.gen));
                    }
                }
            }
            let parents = self.instances[j].pairs.get(&(0, u, v)).map(|st| st.parents.clone()).unwrap_or_default();
            for (x, y) in parents {
                let key = (1, x, y);
                if self.is_active(j, key) {
                    self.refresh(j, key);
                    self.drain(j);
                }
            }
            for (key, gen) in lost {
                let Some(st) = self.instances[j].pairs.get(&key) else { continue };
                if st.gen != gen || !st.links.is_empty() || !self.is_active(j, key) {
                    continue;
                }
                self.compute_path_union(j, key, None);
                self.refresh(j, key);
                self.drain(j);
            }
        }
        Ok(())
    }

    fn is_active(&self, j: usize, key: PairKey) -> bool {
        key.0 == self.k + 1 || self.instances[j].pairs.get(&key).is_some_and(|st| !st.parents.is_empty())
    }

    fn enqueue(&mut self, j: usize, key: PairKey) {
        let gen = self.instances[j].pairs.get(&key).map_or(0, |st| st.gen);
        let inst = &mut self.instances[j];
        if let std::collections::hash_map::Entry::Vacant(slot) = inst.pending.entry(key) {
            slot.insert(gen);
            inst.queue.push_back(key);
        }
    }

    /// Runs deferred parent refreshes until none remain.
    fn drain(&mut self, j: usize) {
        while let Some(key) = self.instances[j].queue.pop_front() {
            let gen = self.instances[j].pending.remove(&key).unwrap_or(0);
            let current = self.instances[j].pairs.get(&key).map_or(0, |st| st.gen);
            if current == gen && self.is_active(j, key) && self.instances[j].reachable {
                self.refresh(j, key);
            }
        }
    }

    fn pair_mut(&mut self, j: usize, key: PairKey) -> &mut PairState {
        self.instances[j].pairs.entry(key).or_default()
    }

    fn remove_children(&mut self, j: usize, key: PairKey) {
        let children = std::mem::take(&mut self.pair_mut(j, key).children);
        for (a, b) in children {
            let ck = (key.0 - 1, a, b);
            let st = self.pair_mut(j, ck);
            st.parents.retain(|&p| p != (key.1, key.2));
            if st.parents.is_empty() {
                st.links_tracked = false;
                if ck.0 > 0 {
                    self.remove_children(j, ck);
                }
            }
        }
    }

    fn recompute_links(&mut self, j: usize, key: PairKey) {
        let (i, x, y) = key;
        let level = &self.hub_levels[i - 1];
        let links: BTreeSet<usize> = (0..level.hubs.len())
            .filter(|&z| level.in_trees[z].contains(x) && level.out_trees[z].contains(y))
            .collect();
        let st = self.pair_mut(j, key);
        st.links = links;
        st.links_tracked = true;
    }

    /// Q(x, y, i) <- P(x, y, 2 h_i, G[Q']) with Q' the pair's own set if it
    /// has one, else the set of `parent` (or of its first parent).
    fn compute_path_union(&mut self, j: usize, key: PairKey, parent: Option<PairKey>) -> NodeSet {
        let (i, x, y) = key;
        let n = self.g.n();
        let source = match self.instances[j].pairs.get(&key).and_then(|st| st.q.clone()) {
            Some(q) => q,
            None => {
                let pk = parent.unwrap_or_else(|| {
                    let p = self.instances[j].pairs[&key].parents[0];
                    (i + 1, p.0, p.1)
                });
                self.q_of(j, pk)
            }
        };
        let bound = self.sched.hops_within(i, 2);
        let (q, work) = path_union(&self.g.view().unit().induced(&source), x, y, bound);
        self.stats.search_work += work;
        self.stats.path_unions += 1;
        self.stats.q_computed += 1;
        let eq: u64 = q.iter().map(|v| self.g.out_edges(v).filter(|(_, e)| q.contains(e.to)).count() as u64).sum();
        let b = self.sched.b(i) as f64;
        let bound_edges = (self.g.m_initial() as f64 / b).min((n * n) as f64 / (b * b));
        if eq as f64 <= bound_edges {
            self.stats.q_within_edge_bound += 1;
        }
        self.pair_mut(j, key).q = Some(q.clone());
        q
    }

    fn q_of(&self, j: usize, key: PairKey) -> NodeSet {
        if key.0 == self.k + 1 {
            NodeSet::full(self.g.n())
        } else {
            self.instances[j].pairs.get(&key).and_then(|st| st.q.clone()).unwrap_or_else(|| NodeSet::empty(self.g.n()))
        }
    }

    fn centers_on_path(&self, path: &[NodeId], i: usize) -> Vec<NodeId> {
        let lower = i - 1;
        let set = self.centers.level(lower);
        let c = self.sched.c(lower);
        let n = self.g.n() as u64;
        let mut out = vec![path[0]];
        let mut last = 0usize;
        for idx in 1..path.len() - 1 {
            // distance along the path at least h_{i-1} / 2 = n / (2 c_{i-1})
            if set.contains(path[idx]) && 2 * (idx - last) as u64 * c >= n {
                out.push(path[idx]);
                last = idx;
            }
        }
        out.push(*path.last().unwrap());
        out
    }

    fn refresh(&mut self, j: usize, key: PairKey) {
        let (i, x, y) = key;
        self.stats.refreshes += 1;
        self.pair_mut(j, key).gen += 1;
        let q = self.q_of(j, key);
        let found = shortest_path(&self.g.view().unit().induced(&q), x, y);
        self.stats.search_work += q.iter().map(|v| self.g.out_degree(v) as u64).sum::<u64>();
        let within = found.filter(|(len, _)| i == self.k + 1 || len * self.sched.c(i) <= self.g.n() as u64);
        let Some((_, path)) = within else {
            if i == self.k + 1 {
                self.instances[j].reachable = false;
                self.remove_children(j, key);
                return;
            }
            let st = self.pair_mut(j, key);
            let was_dead = std::mem::replace(&mut st.dead, true);
            let parents = st.parents.clone();
            if was_dead {
                self.stats.causation_violations += 1;
            }
            self.stats.parent_refreshes_caused += 1;
            for (a, b) in parents {
                self.enqueue(j, (i + 1, a, b));
            }
            return;
        };
        self.remove_children(j, key);
        let chosen = self.centers_on_path(&path, i);
        let mut fresh: Vec<NodeSet> = Vec::new();
        for w in chosen.windows(2) {
            let ck = (i - 1, w[0], w[1]);
            self.pair_mut(j, key).children.push((w[0], w[1]));
            let cst = self.pair_mut(j, ck);
            if !cst.parents.contains(&(x, y)) {
                cst.parents.push((x, y));
            }
            let np = cst.parents.len();
            self.stats.max_parents = self.stats.max_parents.max(np);
            if np > CHILD_OVERLAP_BOUND.pow(self.k as u32) {
                self.stats.parent_violations += 1;
            }
            if i - 1 == 0 {
                continue;
            }
            self.recompute_links(j, ck);
            if self.instances[j].pairs[&ck].links.is_empty() {
                let cq = self.compute_path_union(j, ck, Some(key));
                if !cq.is_subset(&q) {
                    self.stats.subset_violations += 1;
                }
                fresh.push(cq);
                self.refresh(j, ck);
            }
        }
        if !fresh.is_empty() {
            let mut count = vec![0usize; self.g.n()];
            for s in &fresh {
                for v in s.iter() {
                    count[v] += 1;
                }
            }
            let worst = count.into_iter().max().unwrap_or(0);
            self.stats.max_child_overlap = self.stats.max_child_overlap.max(worst);
            if worst > CHILD_OVERLAP_BOUND {
                self.stats.overlap_violations += 1;
            }
        }
    }
}

/// Single-pair wrapper.
#[derive(Clone, Debug)]
pub struct StReach {
    inner: MultiPairReach,
}

impl StReach {
    pub fn new(g: DecrementalGraph, s: NodeId, t: NodeId, cfg: &StReachConfig) -> Result<Self, Error> {
        Ok(StReach { inner: MultiPairReach::new(g, &[(s, t)], cfg)? })
    }

    pub fn delete(&mut self, u: NodeId, v: NodeId) -> Result<(), Error> {
        self.inner.delete(u, v)
    }

    pub fn query(&self) -> bool {
        self.inner.reachable(0)
    }

    pub fn inner(&self) -> &MultiPairReach {
        &self.inner
    }

    pub fn graph(&self) -> &DecrementalGraph {
        self.inner.graph()
    }

    pub fn stats(&self) -> &StructureStats {
        self.inner.stats()
    }

    pub fn work(&self) -> u64 {
        self.inner.work()
    }
}
