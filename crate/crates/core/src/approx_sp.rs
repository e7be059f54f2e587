//! Decremental (1+eps)-approximate s-t shortest paths on weighted graphs.
//!
//! The hierarchy mirrors [`crate::st_reach`] but every pair (x, y, i) of
//! i-centers carries a range index r with dist^{h_i}(x, y) >= (1+eps)^r and a
//! scan position l into the sorted i-hubs. Hub links are tested in scaled
//! ES-trees of G~(8 h_i / eps, r), built lazily per (level, hub, r). A pair
//! without a linking hub keeps a node set Q and a rounded shortest path
//! inside it; when that path gets too long r grows and the parents are
//! refreshed.

use std::collections::{BTreeMap, HashMap, VecDeque};

use log::warn;
use num::{BigRational, One, ToPrimitive};

use crate::error::Error;
use crate::es_tree::EsTree;
use crate::graph::{DecrementalGraph, NodeId, NodeSet, RoundedWeightGraph, Update, INF};
use crate::oracle;
use crate::path_union::{path_union, shortest_path, RoundingSpec};
use crate::sampling::{build_centers, build_hub_levels, seeded_rng, CenterHierarchy, SamplingConfig};
use crate::scale::{floor_u64, int, Eps};
use crate::schedule::ParamSchedule;

/// (level, x, y)
pub type SpKey = (usize, NodeId, NodeId);

#[derive(Clone, Debug)]
pub struct ApproxSpConfig {
    pub schedule: ParamSchedule,
    /// Target accuracy.
    pub eps: Eps,
    pub sampling: SamplingConfig,
    pub seed: u64,
    /// Run internally with eps / (4k + 2) so the final factor is 1 + eps.
    pub recalibrate: bool,
    /// Feed the structure the power-rounded graph instead of G itself.
    pub rounded_feed: bool,
}

impl ApproxSpConfig {
    pub fn new(schedule: ParamSchedule, eps: Eps, seed: u64) -> Self {
        ApproxSpConfig { schedule, eps, sampling: SamplingConfig::default(), seed, recalibrate: true, rounded_feed: false }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ApproxStats {
    pub refreshes: u64,
    pub range_bumps: u64,
    pub hub_advances: u64,
    pub path_unions: u64,
    pub hub_trees_built: u64,
    pub search_work: u64,
    /// A pair needed a larger range than the cap allows.
    pub range_cap_hits: u64,
    pub sampling_warnings: u32,
    pub max_parents: usize,
    pub max_child_overlap: usize,
    pub overlap_violations: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantReport {
    pub i1_checked: u64,
    pub i1_violations: u64,
    pub i2_checked: u64,
    pub i2_violations: u64,
    pub active_checked: u64,
    /// Active pairs with dist(x, y) above (1+eps)^(r+2i+1). Whp zero.
    pub active_violations: u64,
}

#[derive(Clone, Debug, Default)]
struct RangeState {
    r: i64,
    l: usize,
    q: Option<NodeSet>,
    parents: Vec<(NodeId, NodeId)>,
    children: Vec<(NodeId, NodeId)>,
    gen: u64,
}

#[derive(Clone, Debug)]
struct HubTrees {
    out: EsTree,
    inn: EsTree,
    depth: u64,
}

fn work_graph<'a>(base: &'a DecrementalGraph, feed: &'a Option<RoundedWeightGraph>) -> &'a DecrementalGraph {
    feed.as_ref().map_or(base, |f| f.graph())
}

#[derive(Clone, Debug)]
pub struct ApproxSp {
    base: DecrementalGraph,
    feed: Option<RoundedWeightGraph>,
    eps: Eps,
    target: Eps,
    sched: ParamSchedule,
    k: usize,
    s: NodeId,
    t: NodeId,
    centers: CenterHierarchy,
    hubs: Vec<Vec<NodeId>>,
    trees: BTreeMap<(usize, usize, i64), HubTrees>,
    pairs: BTreeMap<SpKey, RangeState>,
    r_max: i64,
    delta: Option<BigRational>,
    delta_epoch: u64,
    queue: VecDeque<SpKey>,
    pending: HashMap<SpKey, u64>,
    stats: ApproxStats,
}

impl ApproxSp {
    pub fn new(g: DecrementalGraph, s: NodeId, t: NodeId, cfg: &ApproxSpConfig) -> Result<Self, Error> {
        let n = g.n();
        if s >= n || t >= n {
            return Err(Error::Param(format!("pair ({s}, {t}) out of range")));
        }
        let sched = cfg.schedule.clone();
        let k = sched.k;
        let eps = if cfg.recalibrate { cfg.eps.divided(4 * k as u64 + 2) } else { cfg.eps.clone() };
        let feed = if cfg.rounded_feed { Some(RoundedWeightGraph::new(&g, eps.clone())?) } else { None };
        let delta_bound = g.m_initial().max(2) as u64;
        let mut rng = seeded_rng(cfg.seed);
        let centers = build_centers(n, &sched.c[1..=k], &[s, t], delta_bound, &mut rng, &cfg.sampling)?;
        let wg = work_graph(&g, &feed);
        let hub_sets = build_hub_levels(wg, &sched.b[1..=k], delta_bound, &mut rng, &cfg.sampling)?;
        let r_max = eps.ceil_log_int((n as u64).saturating_mul(wg.weight_cap()).max(1)) + 2 * k as i64 + 2;
        let stats = ApproxStats { sampling_warnings: centers.warnings + hub_sets.warnings, ..Default::default() };
        let mut me = ApproxSp {
            base: g,
            feed,
            eps,
            target: cfg.eps.clone(),
            sched,
            k,
            s,
            t,
            centers,
            hubs: hub_sets.levels,
            trees: BTreeMap::new(),
            pairs: BTreeMap::new(),
            r_max,
            delta: None,
            delta_epoch: 0,
            queue: VecDeque::new(),
            pending: HashMap::new(),
            stats,
        };
        let top = (k + 1, s, t);
        me.pairs.insert(top, RangeState::default());
        if s == t {
            me.delta = Some(BigRational::from_integer(0.into()));
        } else {
            me.refresh(top);
            me.drain();
        }
        Ok(me)
    }

    /// The graph the caller updates.
    pub fn graph(&self) -> &DecrementalGraph {
        &self.base
    }

    /// The graph the hierarchy actually runs on (G or its rounded copy).
    pub fn working_graph(&self) -> &DecrementalGraph {
        work_graph(&self.base, &self.feed)
    }

    pub fn terminals(&self) -> (NodeId, NodeId) {
        (self.s, self.t)
    }

    /// The accuracy used internally after recalibration.
    pub fn internal_eps(&self) -> &Eps {
        &self.eps
    }

    pub fn target_eps(&self) -> &Eps {
        &self.target
    }

    pub fn schedule(&self) -> &ParamSchedule {
        &self.sched
    }

    pub fn centers(&self) -> &CenterHierarchy {
        &self.centers
    }

    pub fn hubs(&self, i: usize) -> &[NodeId] {
        &self.hubs[i - 1]
    }

    pub fn stats(&self) -> &ApproxStats {
        &self.stats
    }

    /// Sampling and range-cap warnings together. A broken upper bound should
    /// always come with a nonzero count here.
    pub fn warnings(&self) -> u64 {
        self.stats.sampling_warnings as u64 + self.stats.range_cap_hits
    }

    pub fn r_max(&self) -> i64 {
        self.r_max
    }

    /// Current estimate, None when t is unreachable.
    pub fn distance(&self) -> Option<&BigRational> {
        self.delta.as_ref()
    }

    pub fn distance_f64(&self) -> f64 {
        self.delta.as_ref().map_or(f64::INFINITY, |d| d.to_f64().unwrap_or(f64::INFINITY))
    }

    /// Graph epoch of the last top-level refresh.
    pub fn distance_epoch(&self) -> u64 {
        self.delta_epoch
    }

    /// Range index of a pair, if the pair was ever touched.
    pub fn range(&self, key: SpKey) -> Option<i64> {
        self.pairs.get(&key).map(|st| st.r)
    }

    pub fn work(&self) -> u64 {
        let trees: u64 = self.trees.values().map(|t| t.out.work() + t.inn.work()).sum();
        trees + self.stats.search_work
    }

    /// Number of active pairs per level 0..=k+1.
    pub fn active_counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.k + 2];
        for &(i, x, y) in self.pairs.keys() {
            if self.is_active((i, x, y)) {
                out[i] += 1;
            }
        }
        out
    }

    pub fn delete(&mut self, u: NodeId, v: NodeId) -> Result<(), Error> {
        let up = self.base.delete_edge(u, v)?;
        self.after_update(up)
    }

    pub fn increase(&mut self, u: NodeId, v: NodeId, w: u64) -> Result<(), Error> {
        let up = self.base.increase_weight(u, v, w)?;
        self.after_update(up)
    }

    fn after_update(&mut self, up: Update) -> Result<(), Error> {
        let up = match &mut self.feed {
            Some(f) => match f.apply(&up)? {
                Some(x) => x,
                None => return Ok(()),
            },
            None => up,
        };
        let g = work_graph(&self.base, &self.feed);
        for t in self.trees.values_mut() {
            t.out.on_update(g, &up);
            t.inn.on_update(g, &up);
        }
        if self.delta.is_none() {
            return Ok(());
        }
        let parents = self.pairs.get(&(0, up.from, up.to)).map(|st| st.parents.clone()).unwrap_or_default();
        for (x, y) in parents {
            if self.is_active((1, x, y)) {
                self.refresh((1, x, y));
                self.drain();
            }
        }
        for i in 1..=self.k {
            let nb = self.hubs[i - 1].len();
            let keys: Vec<SpKey> = self
                .pairs
                .range((i, 0, 0)..(i + 1, 0, 0))
                .filter(|(_, st)| !st.parents.is_empty())
                .map(|(&key, _)| key)
                .collect();
            for key in keys {
                if !self.is_active(key) || self.delta.is_none() {
                    continue;
                }
                self.update_hub_links(key, None);
                if self.pairs[&key].l == nb + 1 {
                    self.refresh(key);
                    self.drain();
                }
            }
        }
        Ok(())
    }

    fn is_active(&self, key: SpKey) -> bool {
        key.0 == self.k + 1 || self.pairs.get(&key).is_some_and(|st| !st.parents.is_empty())
    }

    fn enqueue(&mut self, key: SpKey) {
        let gen = self.pairs.get(&key).map_or(0, |st| st.gen);
        if let std::collections::hash_map::Entry::Vacant(slot) = self.pending.entry(key) {
            slot.insert(gen);
            self.queue.push_back(key);
        }
    }

    fn drain(&mut self) {
        while let Some(key) = self.queue.pop_front() {
            let gen = self.pending.remove(&key).unwrap_or(0);
            let current = self.pairs.get(&key).map_or(0, |st| st.gen);
            if current == gen && self.is_active(key) && self.delta.is_some() {
                self.refresh(key);
            }
        }
    }

    fn pair_mut(&mut self, key: SpKey) -> &mut RangeState {
        self.pairs.entry(key).or_insert_with(|| RangeState { l: 1, ..Default::default() })
    }

    fn remove_children(&mut self, key: SpKey) {
        let children = std::mem::take(&mut self.pair_mut(key).children);
        for (a, b) in children {
            let ck = (key.0 - 1, a, b);
            let st = self.pair_mut(ck);
            st.parents.retain(|&p| p != (key.1, key.2));
            if st.parents.is_empty() && ck.0 > 0 {
                self.remove_children(ck);
            }
        }
    }

    fn hub_hops(&self, i: usize) -> BigRational {
        int(8) * self.sched.h(i) / self.eps.value()
    }

    fn hub_spec(&self, i: usize, r: i64) -> RoundingSpec {
        RoundingSpec::new(self.eps.clone(), self.hub_hops(i), r)
    }

    /// Does the `zi`-th i-hub link x to y at range r?
    fn links(&mut self, i: usize, zi: usize, r: i64, x: NodeId, y: NodeId) -> bool {
        let tkey = (i, zi, r);
        if !self.trees.contains_key(&tkey) {
            let spec = self.hub_spec(i, r);
            let depth = spec.units_within(&BigRational::one(), r + 2 * i as i64 + 1);
            let z = self.hubs[i - 1][zi];
            let g = work_graph(&self.base, &self.feed);
            let view = g.view().with_transform(spec.transform());
            let out = EsTree::build(&view, z, depth);
            let inn = EsTree::build(&view.reversed(), z, depth);
            self.stats.hub_trees_built += 2;
            self.trees.insert(tkey, HubTrees { out, inn, depth });
        }
        let t = &self.trees[&tkey];
        match (t.inn.level(x), t.out.level(y)) {
            (Some(a), Some(b)) => a.saturating_add(b) <= t.depth,
            _ => false,
        }
    }

    /// Advances l past hubs that do not link the pair. Returns true if Q was
    /// computed on reaching the end of the hub list.
    fn update_hub_links(&mut self, key: SpKey, parent: Option<SpKey>) -> bool {
        let (i, x, y) = key;
        let nb = self.hubs[i - 1].len();
        let mut computed = false;
        loop {
            let st = self.pair_mut(key);
            let (l, r) = (st.l, st.r);
            if l > nb || self.links(i, l - 1, r, x, y) {
                break;
            }
            self.pair_mut(key).l += 1;
            self.stats.hub_advances += 1;
            if l + 1 == nb + 1 {
                self.compute_q(key, parent);
                computed = true;
            }
        }
        computed
    }

    /// Q(x, y, i) <- P(x, y, (1+eps)^(r+2i+1), G~(8 h_i / eps, r)[Q(parent)]).
    fn compute_q(&mut self, key: SpKey, parent: Option<SpKey>) -> NodeSet {
        let (i, x, y) = key;
        let pk = parent.unwrap_or_else(|| {
            let p = self.pairs[&key].parents[0];
            (i + 1, p.0, p.1)
        });
        let source = self.q_of(pk);
        let r = self.pairs[&key].r;
        let spec = self.hub_spec(i, r);
        let bound = spec.units_within(&BigRational::one(), r + 2 * i as i64 + 1);
        let g = work_graph(&self.base, &self.feed);
        let (q, work) = path_union(&g.view().induced(&source).with_transform(spec.transform()), x, y, bound);
        self.stats.search_work += work;
        self.stats.path_unions += 1;
        self.pair_mut(key).q = Some(q.clone());
        q
    }

    fn q_of(&self, key: SpKey) -> NodeSet {
        let n = self.base.n();
        if key.0 == self.k + 1 {
            NodeSet::full(n)
        } else {
            self.pairs.get(&key).and_then(|st| st.q.clone()).unwrap_or_else(|| NodeSet::empty(n))
        }
    }

    fn refresh(&mut self, key: SpKey) {
        let (i, x, y) = key;
        self.stats.refreshes += 1;
        self.pair_mut(key).gen += 1;
        self.remove_children(key);
        let g = work_graph(&self.base, &self.feed);
        if i == self.k + 1 {
            self.stats.search_work += g.m_alive() as u64;
            match shortest_path(&g.view(), x, y) {
                None => {
                    self.delta = None;
                    self.delta_epoch = self.base.epoch();
                }
                Some((d, path)) => {
                    let est = self.eps.pow(2 * self.k as i64 + 1) * int(d);
                    self.delta = Some(est);
                    self.delta_epoch = self.base.epoch();
                    self.wire(key, &path, NodeSet::full(g.n()));
                }
            }
            return;
        }
        let q = self.q_of(key);
        let r = self.pairs[&key].r;
        let spec = RoundingSpec::new(self.eps.clone(), self.sched.h(i), r);
        let found = shortest_path(&g.view().induced(&q).with_transform(spec.transform()), x, y);
        self.stats.search_work += q.iter().map(|v| g.out_degree(v) as u64).sum::<u64>();
        let threshold = spec.units_within(&BigRational::one(), r + 2);
        let path = match found {
            Some((d, path)) if d <= threshold => path,
            found => {
                if r < self.r_max {
                    let st = self.pair_mut(key);
                    st.r += 1;
                    st.l = 1;
                    let parents = st.parents.clone();
                    self.stats.range_bumps += 1;
                    for (a, b) in parents {
                        self.enqueue((i + 1, a, b));
                    }
                    return;
                }
                self.stats.range_cap_hits += 1;
                warn!("sampling failure: pair {key:?} exceeded the range cap {}", self.r_max);
                match found {
                    Some((_, path)) => path,
                    None => return,
                }
            }
        };
        self.wire(key, &path, q);
    }

    /// Makes consecutive (i-1)-centers on `path` children of `key`.
    fn wire(&mut self, key: SpKey, path: &[NodeId], parent_q: NodeSet) {
        let (i, x, y) = key;
        let lower = i - 1;
        let chosen: Vec<NodeId> = if lower == 0 {
            path.to_vec()
        } else {
            let set = self.centers.level(lower);
            path.iter().copied().filter(|&v| set.contains(v)).collect()
        };
        let mut fresh: Vec<NodeSet> = Vec::new();
        for w in chosen.windows(2) {
            let ck = (lower, w[0], w[1]);
            self.pair_mut(key).children.push((w[0], w[1]));
            let cst = self.pair_mut(ck);
            if !cst.parents.contains(&(x, y)) {
                cst.parents.push((x, y));
            }
            let np = cst.parents.len();
            self.stats.max_parents = self.stats.max_parents.max(np);
            if lower == 0 {
                continue;
            }
            let computed = self.update_hub_links(ck, Some(key));
            if self.pairs[&ck].l == self.hubs[lower - 1].len() + 1 {
                let cq = if computed { self.q_of(ck) } else { self.compute_q(ck, Some(key)) };
                debug_assert!(cq.is_subset(&parent_q));
                fresh.push(cq);
                self.refresh(ck);
            }
        }
        if !fresh.is_empty() {
            let mut count = vec![0usize; self.base.n()];
            for s in &fresh {
                for v in s.iter() {
                    count[v] += 1;
                }
            }
            let worst = count.into_iter().max().unwrap_or(0);
            self.stats.max_child_overlap = self.stats.max_child_overlap.max(worst);
            if worst as u64 > self.overlap_bound(i) {
                self.stats.overlap_violations += 1;
            }
        }
    }

    /// 2^(2i+2) ceil(log_{1+eps}(n W)) children of one level-i pair may share a node.
    pub fn overlap_bound(&self, i: usize) -> u64 {
        let g = self.working_graph();
        let logs = self.eps.ceil_log_int((g.n() as u64).saturating_mul(g.max_weight().max(1)).max(2)).max(1) as u64;
        (1u64 << (2 * i + 2).min(60)).saturating_mul(logs)
    }

    /// Checks I1 for every pair, I2 and the distance bound for active pairs
    /// at the end of their hub list, against Bellman-Ford and Dijkstra on
    /// the working graph. Quadratic; meant for small n.
    pub fn check_invariants(&self) -> InvariantReport {
        let g = self.working_graph();
        let n = g.n();
        let view = g.view();
        let mut rep = InvariantReport::default();
        let mut hop_cache: HashMap<(NodeId, usize), Vec<u64>> = HashMap::new();
        let mut dist_cache: HashMap<NodeId, Vec<u64>> = HashMap::new();
        for (&(i, x, y), st) in &self.pairs {
            if i == 0 || i > self.k {
                continue;
            }
            let hops = floor_u64(&self.sched.h(i)).min(n as u64) as usize;
            let d = hop_cache.entry((x, hops)).or_insert_with(|| oracle::hop_dist(&view, x, hops))[y];
            rep.i1_checked += 1;
            if d != INF && int(d) < self.eps.pow(st.r) {
                rep.i1_violations += 1;
            }
            if st.parents.is_empty() {
                continue;
            }
            let dd = dist_cache.entry(x).or_insert_with(|| oracle::dijkstra_dist(&view, x))[y];
            rep.active_checked += 1;
            if dd == INF || int(dd) > self.eps.pow(st.r + 2 * i as i64 + 1) {
                rep.active_violations += 1;
            }
            if st.l == self.hubs[i - 1].len() + 1 {
                let h = floor_u64(&self.hub_hops(i)).min(2 * n as u64) as usize;
                let bound = floor_u64(&self.eps.pow(st.r + 2 * i as i64));
                let inner = oracle::hop_path_union(&view, x, y, bound, h);
                rep.i2_checked += 1;
                let q = st.q.clone().unwrap_or_else(|| NodeSet::empty(n));
                if !inner.is_subset(&q) {
                    rep.i2_violations += 1;
                }
            }
        }
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: u64, m: u64, seed: u64) -> ApproxSpConfig {
        let sched = ParamSchedule::pinned(n, m, &[4, 2], &[6, 3]).unwrap();
        ApproxSpConfig::new(sched, "0.5".parse().unwrap(), seed)
    }

    #[test]
    fn path_three_estimate() {
        let g = DecrementalGraph::new(3, &[(0, 1, 1), (1, 2, 1)], 1).unwrap();
        let sp = ApproxSp::new(g, 0, 2, &cfg(3, 2, 1)).unwrap();
        let d = sp.distance().unwrap().clone();
        assert!(d >= int(2));
        assert!(d <= sp.internal_eps().pow(5) * int(2));
    }

    #[test]
    fn unreachable_is_infinite() {
        let g = DecrementalGraph::new(3, &[(0, 1, 1)], 1).unwrap();
        let mut sp = ApproxSp::new(g, 0, 2, &cfg(3, 1, 1)).unwrap();
        assert!(sp.distance().is_none());
        sp.delete(0, 1).unwrap();
        assert!(sp.distance().is_none());
    }

    #[test]
    fn increase_off_path_keeps_estimate() {
        let g = DecrementalGraph::new(4, &[(0, 1, 1), (1, 3, 1), (0, 2, 5), (2, 3, 5)], 16).unwrap();
        let mut sp = ApproxSp::new(g, 0, 3, &cfg(4, 4, 2)).unwrap();
        let before = sp.distance().cloned();
        sp.increase(0, 2, 9).unwrap();
        assert_eq!(sp.distance().cloned(), before);
        sp.delete(1, 3).unwrap();
        assert!(sp.distance().unwrap() >= &int(14));
        sp.delete(2, 3).unwrap();
        assert!(sp.distance().is_none());
    }
}
