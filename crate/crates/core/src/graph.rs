//! Decremental weighted digraph with update notification, node sets and
//! filtered or rescaled views.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::GraphError;
use crate::scale::{Eps, Scaler};

pub type NodeId = usize;
pub type EdgeId = usize;

/// Level or distance value meaning "unreachable within the bound".
pub const INF: u64 = u64::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub weight: u64,
    pub alive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateKind {
    Delete,
    Increase { old: u64, new: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Update {
    pub edge: EdgeId,
    pub from: NodeId,
    pub to: NodeId,
    pub kind: UpdateKind,
}

/// Anything that wants to hear about graph updates after they are applied.
pub trait UpdateListener {
    fn on_update(&mut self, g: &DecrementalGraph, update: &Update);
}

/// Upper bound on the maximum weight: W <= 2^(L^c) with L = max(2, ceil(log2 n)).
#[derive(Clone, Copy, Debug)]
pub struct WeightLimit {
    pub log_exponent: u32,
}

impl Default for WeightLimit {
    fn default() -> Self {
        WeightLimit { log_exponent: 4 }
    }
}

impl WeightLimit {
    pub fn max_bits(&self, n: usize) -> u32 {
        let l = (n.max(2) as f64).log2().ceil().max(2.0) as u32;
        l.saturating_pow(self.log_exponent).min(62)
    }
}

#[derive(Clone, Debug)]
pub struct DecrementalGraph {
    n: usize,
    edges: Vec<Edge>,
    out: Vec<Vec<EdgeId>>,
    inc: Vec<Vec<EdgeId>>,
    index: HashMap<(NodeId, NodeId), EdgeId>,
    max_weight: u64,
    weight_cap: u64,
    alive: usize,
    stale_in_lists: usize,
    delta: u64,
    epoch: u64,
}

impl DecrementalGraph {
    /// Builds a graph with maximum weight `max_weight`; later increases may go up to n * W.
    pub fn new(
        n: usize,
        edges: &[(NodeId, NodeId, u64)],
        max_weight: u64,
    ) -> Result<Self, GraphError> {
        Self::with_limit(n, edges, max_weight, WeightLimit::default())
    }

    pub fn with_limit(
        n: usize,
        edges: &[(NodeId, NodeId, u64)],
        max_weight: u64,
        limit: WeightLimit,
    ) -> Result<Self, GraphError> {
        let bits = limit.max_bits(n);
        if max_weight == 0 || (max_weight as u128) > (1u128 << bits) {
            return Err(GraphError::WeightBoundTooLarge(max_weight, bits));
        }
        let cap = (n.max(1) as u64).saturating_mul(max_weight);
        Self::build(n, edges, max_weight, cap)
    }

    /// Builds a graph with an explicit cap for weight increases.
    pub fn with_cap(
        n: usize,
        edges: &[(NodeId, NodeId, u64)],
        max_weight: u64,
        weight_cap: u64,
    ) -> Result<Self, GraphError> {
        Self::build(n, edges, max_weight, weight_cap.max(max_weight))
    }

    fn build(
        n: usize,
        edges: &[(NodeId, NodeId, u64)],
        max_weight: u64,
        weight_cap: u64,
    ) -> Result<Self, GraphError> {
        let mut g = DecrementalGraph {
            n,
            edges: Vec::with_capacity(edges.len()),
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
            index: HashMap::with_capacity(edges.len()),
            max_weight,
            weight_cap,
            alive: 0,
            stale_in_lists: 0,
            delta: 0,
            epoch: 0,
        };
        for &(u, v, w) in edges {
            g.check_node(u)?;
            g.check_node(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if w == 0 || w > max_weight {
                return Err(GraphError::BadWeight(u, v, w, max_weight));
            }
            if g.index.contains_key(&(u, v)) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            let id = g.edges.len();
            g.edges.push(Edge { from: u, to: v, weight: w, alive: true });
            g.index.insert((u, v), id);
            g.out[u].push(id);
            g.inc[v].push(id);
        }
        g.alive = g.edges.len();
        // Stable adjacency order by neighbour id keeps tie-breaking deterministic.
        for v in 0..n {
            let edges = &g.edges;
            g.out[v].sort_by_key(|&e| edges[e].to);
            g.inc[v].sort_by_key(|&e| edges[e].from);
        }
        Ok(g)
    }

    fn check_node(&self, v: NodeId) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::NodeOutOfRange(v, self.n))
        } else {
            Ok(())
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges ever inserted (edge ids range over 0..m_initial).
    pub fn m_initial(&self) -> usize {
        self.edges.len()
    }

    pub fn m_alive(&self) -> usize {
        self.alive
    }

    pub fn max_weight(&self) -> u64 {
        self.max_weight
    }

    pub fn weight_cap(&self) -> u64 {
        self.weight_cap
    }

    /// Number of updates applied so far.
    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_id(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        self.index.get(&(u, v)).copied().filter(|&e| self.edges[e].alive)
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<u64> {
        self.edge_id(u, v).map(|e| self.edges[e].weight)
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn out_edges(&self, v: NodeId) -> impl Iterator<Item = (EdgeId, &Edge)> + '_ {
        self.out[v].iter().map(|&e| (e, &self.edges[e])).filter(|(_, ed)| ed.alive)
    }

    pub fn in_edges(&self, v: NodeId) -> impl Iterator<Item = (EdgeId, &Edge)> + '_ {
        self.inc[v].iter().map(|&e| (e, &self.edges[e])).filter(|(_, ed)| ed.alive)
    }

    pub fn alive_edges(&self) -> impl Iterator<Item = (EdgeId, &Edge)> + '_ {
        self.edges.iter().enumerate().filter(|(_, e)| e.alive)
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out_edges(v).count()
    }

    pub fn delete_edge(&mut self, u: NodeId, v: NodeId) -> Result<Update, GraphError> {
        self.check_node(u)?;
        self.check_node(v)?;
        let e = self.edge_id(u, v).ok_or(GraphError::MissingEdge(u, v))?;
        self.edges[e].alive = false;
        self.alive -= 1;
        self.stale_in_lists += 1;
        self.delta += 1;
        self.epoch += 1;
        if self.stale_in_lists > self.alive.max(16) {
            self.compact();
        }
        Ok(Update { edge: e, from: u, to: v, kind: UpdateKind::Delete })
    }

    pub fn increase_weight(&mut self, u: NodeId, v: NodeId, w: u64) -> Result<Update, GraphError> {
        self.check_node(u)?;
        self.check_node(v)?;
        let e = self.edge_id(u, v).ok_or(GraphError::MissingEdge(u, v))?;
        let old = self.edges[e].weight;
        if w <= old {
            return Err(GraphError::NotAnIncrease(u, v, w, old));
        }
        if w > self.weight_cap {
            return Err(GraphError::BadWeight(u, v, w, self.weight_cap));
        }
        self.edges[e].weight = w;
        self.delta += 1;
        self.epoch += 1;
        Ok(Update { edge: e, from: u, to: v, kind: UpdateKind::Increase { old, new: w } })
    }

    pub fn delete_edge_notify(
        &mut self,
        u: NodeId,
        v: NodeId,
        listeners: &mut [&mut dyn UpdateListener],
    ) -> Result<Update, GraphError> {
        let up = self.delete_edge(u, v)?;
        for l in listeners.iter_mut() {
            l.on_update(self, &up);
        }
        Ok(up)
    }

    pub fn increase_weight_notify(
        &mut self,
        u: NodeId,
        v: NodeId,
        w: u64,
        listeners: &mut [&mut dyn UpdateListener],
    ) -> Result<Update, GraphError> {
        let up = self.increase_weight(u, v, w)?;
        for l in listeners.iter_mut() {
            l.on_update(self, &up);
        }
        Ok(up)
    }

    fn compact(&mut self) {
        let edges = &self.edges;
        for list in self.out.iter_mut().chain(self.inc.iter_mut()) {
            list.retain(|&e| edges[e].alive);
        }
        self.stale_in_lists = 0;
    }

    pub fn view(&self) -> GraphView<'_> {
        GraphView::new(self)
    }

    /// The live edges as (u, v, w) triples, ordered by edge id.
    pub fn edge_list(&self) -> Vec<(NodeId, NodeId, u64)> {
        self.alive_edges().map(|(_, e)| (e.from, e.to, e.weight)).collect()
    }
}

/// A set of nodes over a fixed universe 0..n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSet {
    bits: FixedBitSet,
}

impl NodeSet {
    pub fn empty(n: usize) -> Self {
        NodeSet { bits: FixedBitSet::with_capacity(n) }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        NodeSet { bits }
    }

    pub fn from_nodes(n: usize, nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let mut s = NodeSet::empty(n);
        for v in nodes {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, v: NodeId) -> bool {
        !self.bits.put(v)
    }

    pub fn remove(&mut self, v: NodeId) {
        self.bits.set(v, false);
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.bits.ones()
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn difference_with(&mut self, other: &NodeSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn to_vec(&self) -> Vec<NodeId> {
        self.iter().collect()
    }
}

/// Per-view weight map from base weights to the integer weights an
/// algorithm actually works with.
#[derive(Clone, Debug)]
pub enum WeightTransform {
    Identity,
    /// Every edge has weight 1.
    Unit,
    /// ceil(w / unit) for a rational unit.
    Scaled(Scaler),
    /// Weights are stored as exponent codes c >= 1 meaning (1+eps)^(c-1);
    /// the result is ceil((1+eps)^(c-1) / unit).
    PowerCode { eps: Eps, scaler: Scaler },
}

impl WeightTransform {
    pub fn apply(&self, w: u64) -> u64 {
        match self {
            WeightTransform::Identity => w,
            WeightTransform::Unit => 1,
            WeightTransform::Scaled(s) => s.units(w),
            WeightTransform::PowerCode { eps, scaler } => {
                let x = eps.pow(w as i64 - 1) / scaler.unit();
                crate::scale::ceil_u64(&x)
            }
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, WeightTransform::Unit)
    }
}

/// Induced, possibly reversed and rescaled, view of a graph.
#[derive(Clone, Debug)]
pub struct GraphView<'a> {
    pub base: &'a DecrementalGraph,
    pub filter: Option<&'a NodeSet>,
    pub reversed: bool,
    pub transform: WeightTransform,
}

impl<'a> GraphView<'a> {
    pub fn new(base: &'a DecrementalGraph) -> Self {
        GraphView { base, filter: None, reversed: false, transform: WeightTransform::Identity }
    }

    pub fn induced(mut self, nodes: &'a NodeSet) -> Self {
        self.filter = Some(nodes);
        self
    }

    pub fn reversed(mut self) -> Self {
        self.reversed = !self.reversed;
        self
    }

    pub fn with_transform(mut self, t: WeightTransform) -> Self {
        self.transform = t;
        self
    }

    pub fn unit(self) -> Self {
        self.with_transform(WeightTransform::Unit)
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.filter.is_none_or(|f| f.contains(v))
    }

    /// Calls `f(edge_id, neighbour, weight)` for every edge leaving `v` in
    /// this view, in increasing neighbour order.
    pub fn for_each_out(&self, v: NodeId, mut f: impl FnMut(EdgeId, NodeId, u64)) {
        if !self.contains(v) {
            return;
        }
        let it: Box<dyn Iterator<Item = (EdgeId, &Edge)>> = if self.reversed {
            Box::new(self.base.in_edges(v))
        } else {
            Box::new(self.base.out_edges(v))
        };
        for (id, e) in it {
            let to = if self.reversed { e.from } else { e.to };
            if self.contains(to) {
                f(id, to, self.transform.apply(e.weight));
            }
        }
    }

    /// Edges of the induced subgraph as (tail, head, weight) in view orientation.
    pub fn edges(&self) -> Vec<(EdgeId, NodeId, NodeId, u64)> {
        let mut out = Vec::new();
        for (id, e) in self.base.alive_edges() {
            if self.contains(e.from) && self.contains(e.to) {
                let (a, b) = if self.reversed { (e.to, e.from) } else { (e.from, e.to) };
                out.push((id, a, b, self.transform.apply(e.weight)));
            }
        }
        out
    }
}

/// Emits the power-rounded graph: an edge of weight w is presented with
/// weight floor((1+eps)^(i+1)) where (1+eps)^i <= w < (1+eps)^(i+1), and a
/// weight increase is forwarded only when the rounded value changes.
#[derive(Clone, Debug)]
pub struct RoundedWeightGraph {
    eps: Eps,
    rounded: DecrementalGraph,
    emitted: Vec<u32>,
}

impl RoundedWeightGraph {
    pub fn new(base: &DecrementalGraph, eps: Eps) -> Result<Self, GraphError> {
        let edges: Vec<_> = base
            .alive_edges()
            .map(|(_, e)| (e.from, e.to, crate::scale::round_weight_up(e.weight, &eps)))
            .collect();
        let max_w = crate::scale::round_weight_up(base.max_weight(), &eps);
        let cap = crate::scale::round_weight_up(base.weight_cap(), &eps);
        let rounded = DecrementalGraph::with_cap(base.n(), &edges, max_w, cap)?;
        let emitted = vec![0; rounded.m_initial()];
        Ok(RoundedWeightGraph { eps, rounded, emitted })
    }

    pub fn graph(&self) -> &DecrementalGraph {
        &self.rounded
    }

    pub fn eps(&self) -> &Eps {
        &self.eps
    }

    /// Mirrors an update already applied to the base graph. Returns the
    /// update applied to the rounded graph, if any.
    pub fn apply(&mut self, up: &Update) -> Result<Option<Update>, GraphError> {
        match up.kind {
            UpdateKind::Delete => Ok(Some(self.rounded.delete_edge(up.from, up.to)?)),
            UpdateKind::Increase { new, .. } => {
                let w = crate::scale::round_weight_up(new, &self.eps);
                let cur = self.rounded.weight(up.from, up.to).ok_or(GraphError::MissingEdge(up.from, up.to))?;
                if w <= cur {
                    return Ok(None);
                }
                let out = self.rounded.increase_weight(up.from, up.to, w)?;
                self.emitted[out.edge] += 1;
                Ok(Some(out))
            }
        }
    }

    /// Largest number of forwarded increases for a single edge.
    pub fn max_emitted(&self) -> u32 {
        self.emitted.iter().copied().max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> DecrementalGraph {
        DecrementalGraph::new(4, &[(0, 1, 1), (1, 2, 2), (2, 3, 1), (0, 2, 5)], 5).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(DecrementalGraph::new(3, &[(0, 0, 1)], 1).unwrap_err(), GraphError::SelfLoop(0));
        assert_eq!(
            DecrementalGraph::new(3, &[(0, 1, 1), (0, 1, 1)], 1).unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
        assert!(matches!(DecrementalGraph::new(3, &[(0, 1, 0)], 1), Err(GraphError::BadWeight(..))));
        assert!(matches!(DecrementalGraph::new(3, &[(0, 1, 3)], 2), Err(GraphError::BadWeight(..))));
        assert!(matches!(DecrementalGraph::new(3, &[(0, 5, 1)], 1), Err(GraphError::NodeOutOfRange(5, 3))));
        assert!(matches!(
            DecrementalGraph::new(4, &[], 1 << 40),
            Err(GraphError::WeightBoundTooLarge(..))
        ));
    }

    #[test]
    fn delete_and_increase() {
        let mut g = small();
        assert_eq!(g.delete_edge(5, 1).unwrap_err(), GraphError::NodeOutOfRange(5, 4));
        let up = g.delete_edge(0, 1).unwrap();
        assert_eq!(up.kind, UpdateKind::Delete);
        assert_eq!(g.delete_edge(0, 1).unwrap_err(), GraphError::MissingEdge(0, 1));
        assert_eq!(g.increase_weight(1, 2, 2).unwrap_err(), GraphError::NotAnIncrease(1, 2, 2, 2));
        let up = g.increase_weight(1, 2, 7).unwrap();
        assert_eq!(up.kind, UpdateKind::Increase { old: 2, new: 7 });
        assert!(g.increase_weight(1, 2, 21).is_err());
        assert_eq!(g.delta(), 2);
        assert_eq!(g.m_alive(), 3);
    }

    struct Recorder(Vec<(usize, EdgeId)>, usize);
    impl UpdateListener for Recorder {
        fn on_update(&mut self, _g: &DecrementalGraph, u: &Update) {
            self.0.push((self.1, u.edge));
        }
    }

    #[test]
    fn listeners_in_registration_order() {
        let mut g = small();
        let mut a = Recorder(Vec::new(), 1);
        let mut b = Recorder(Vec::new(), 2);
        g.delete_edge_notify(2, 3, &mut [&mut a, &mut b]).unwrap();
        assert_eq!(a.0, vec![(1, 2)]);
        assert_eq!(b.0, vec![(2, 2)]);
    }

    #[test]
    fn views_filter_and_reverse() {
        let g = small();
        let set = NodeSet::from_nodes(4, [0, 1, 2]);
        let v = g.view().induced(&set);
        assert_eq!(v.edges().len(), 3);
        let mut seen = Vec::new();
        g.view().reversed().for_each_out(2, |_, to, w| seen.push((to, w)));
        assert_eq!(seen, vec![(0, 5), (1, 2)]);
    }

    #[test]
    fn compaction_keeps_lists_consistent() {
        let edges: Vec<_> = (0..40).map(|i| (i % 10, (i % 10 + 1 + i / 10) % 10, 1)).collect();
        let mut g = DecrementalGraph::new(10, &edges, 1).unwrap();
        for &(u, v, _) in edges.iter().take(30) {
            g.delete_edge(u, v).unwrap();
        }
        let total: usize = (0..10).map(|v| g.out_degree(v)).sum();
        assert_eq!(total, 10);
        assert_eq!(g.m_alive(), 10);
    }

    #[test]
    fn rounded_feed_suppresses_small_increases() {
        let base0 = DecrementalGraph::new(3, &[(0, 1, 5)], 16).unwrap();
        let mut base = base0.clone();
        let mut rg = RoundedWeightGraph::new(&base, Eps::from_ratio(1, 1)).unwrap();
        assert_eq!(rg.graph().weight(0, 1), Some(8));
        let up = base.increase_weight(0, 1, 6).unwrap();
        assert_eq!(rg.apply(&up).unwrap(), None);
        let up = base.increase_weight(0, 1, 9).unwrap();
        assert!(rg.apply(&up).unwrap().is_some());
        assert_eq!(rg.graph().weight(0, 1), Some(16));
        assert_eq!(rg.max_emitted(), 1);
    }
}
