//! Even-Shiloach tree: exact distances from a root up to a depth bound under
//! edge deletions and weight increases.
//!
//! The tree keeps its own copy of the (filtered, reoriented, rescaled) edge
//! set so that several trees over different views of one base graph can be
//! updated independently. Total work over any update sequence is bounded by
//! `WORK_CONSTANT * m * depth` for depth >= 1: every node takes at most
//! depth + 2 distinct level values, each costing two passes over its in-edges
//! and one over its out-edges, plus two passes over all edges at build time.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::graph::{DecrementalGraph, EdgeId, GraphView, NodeId, Update, UpdateKind, WeightTransform, INF};

/// Constant in the work bound `work <= C * m * D`.
pub const WORK_CONSTANT: u64 = 14;

pub const COUNTER_HEADER: &str = "tree_id,m,depth,total_work";

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct LocalEdge {
    tail: NodeId,
    head: NodeId,
    w: u64,
    alive: bool,
}

/// Nodes whose level became infinite during one update.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DropReport {
    pub dropped: Vec<NodeId>,
}

impl DropReport {
    pub fn is_empty(&self) -> bool {
        self.dropped.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct EsTree {
    root: NodeId,
    depth: u64,
    reversed: bool,
    transform: WeightTransform,
    levels: Vec<u64>,
    parent_edge: Vec<u32>,
    /// Position in `in_lists[v]` from which the next tight-parent search starts.
    ptr: Vec<u32>,
    edges: Vec<LocalEdge>,
    local_of: HashMap<EdgeId, u32>,
    in_lists: Vec<Vec<u32>>,
    out_lists: Vec<Vec<u32>>,
    work: u64,
    heap: BinaryHeap<Reverse<(u64, NodeId)>>,
    queued: Vec<bool>,
}

impl EsTree {
    /// Builds the tree over `view` (its filter, orientation and weights are
    /// fixed at build time) with the given root and depth bound.
    pub fn build(view: &GraphView, root: NodeId, depth: u64) -> Self {
        let n = view.n();
        let mut t = EsTree {
            root,
            depth,
            reversed: view.reversed,
            transform: view.transform.clone(),
            levels: vec![INF; n],
            parent_edge: vec![NONE; n],
            ptr: vec![0; n],
            edges: Vec::new(),
            local_of: HashMap::new(),
            in_lists: vec![Vec::new(); n],
            out_lists: vec![Vec::new(); n],
            work: 0,
            heap: BinaryHeap::new(),
            queued: vec![false; n],
        };
        for (id, tail, head, w) in view.edges() {
            let lid = t.edges.len() as u32;
            t.edges.push(LocalEdge { tail, head, w, alive: true });
            t.local_of.insert(id, lid);
            t.in_lists[head].push(lid);
            t.out_lists[tail].push(lid);
        }
        let edges = &t.edges;
        for l in t.in_lists.iter_mut() {
            l.sort_by_key(|&e| edges[e as usize].tail);
        }
        if view.contains(root) {
            t.initial_dijkstra();
        }
        t
    }

    pub fn forward(g: &DecrementalGraph, root: NodeId, depth: u64) -> Self {
        Self::build(&g.view().unit(), root, depth)
    }

    pub fn backward(g: &DecrementalGraph, root: NodeId, depth: u64) -> Self {
        Self::build(&g.view().unit().reversed(), root, depth)
    }

    fn initial_dijkstra(&mut self) {
        let mut heap = BinaryHeap::from([Reverse((0u64, self.root))]);
        self.levels[self.root] = 0;
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > self.levels[v] {
                continue;
            }
            for &le in &self.out_lists[v] {
                self.work += 1;
                let e = &self.edges[le as usize];
                let nd = d.saturating_add(e.w);
                if nd <= self.depth && nd < self.levels[e.head] {
                    self.levels[e.head] = nd;
                    heap.push(Reverse((nd, e.head)));
                }
            }
        }
        for v in 0..self.levels.len() {
            if v != self.root && self.levels[v] != INF {
                self.find_tight_parent(v);
            }
        }
    }

    /// Advances the pointer of `v` to the first tight in-edge at or after
    /// it. Returns false if none exists.
    fn find_tight_parent(&mut self, v: NodeId) -> bool {
        let lv = self.levels[v];
        let list = &self.in_lists[v];
        let mut p = self.ptr[v] as usize;
        while p < list.len() {
            self.work += 1;
            let e = &self.edges[list[p] as usize];
            if e.alive && self.levels[e.tail] != INF && self.levels[e.tail] + e.w == lv {
                self.ptr[v] = p as u32;
                self.parent_edge[v] = list[p];
                return true;
            }
            p += 1;
        }
        self.ptr[v] = p as u32;
        self.parent_edge[v] = NONE;
        false
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn depth(&self) -> u64 {
        self.depth
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    /// Exact distance from the root if it is at most the depth bound.
    pub fn level(&self, v: NodeId) -> Option<u64> {
        let l = self.levels[v];
        (l != INF).then_some(l)
    }

    pub fn raw_level(&self, v: NodeId) -> u64 {
        self.levels[v]
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.levels[v] != INF
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        let e = self.parent_edge[v];
        (e != NONE).then(|| self.edges[e as usize].tail)
    }

    pub fn work(&self) -> u64 {
        self.work
    }

    /// Number of edges in the tree's own copy of the graph.
    pub fn m_local(&self) -> usize {
        self.edges.len()
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    /// Work bound C * m * D for this tree (m counts at least one edge).
    pub fn work_bound(&self) -> u64 {
        WORK_CONSTANT
            .saturating_mul(self.edges.len().max(1) as u64)
            .saturating_mul(self.depth.max(1))
    }

    /// Counter export row `tree_id,m,depth,total_work` (see [`COUNTER_HEADER`]).
    pub fn counter_row(&self, id: usize) -> String {
        format!("{id},{},{},{}", self.edges.len(), self.depth, self.work)
    }

    /// Applies an update of the base graph. Edges outside the tree's view
    /// are ignored.
    pub fn on_update(&mut self, _g: &DecrementalGraph, up: &Update) -> DropReport {
        let Some(&le) = self.local_of.get(&up.edge) else {
            return DropReport::default();
        };
        let e = &mut self.edges[le as usize];
        if !e.alive {
            return DropReport::default();
        }
        match up.kind {
            UpdateKind::Delete => e.alive = false,
            UpdateKind::Increase { new, .. } => {
                let w = self.transform.apply(new);
                if w <= e.w {
                    return DropReport::default();
                }
                e.w = w;
            }
        }
        let head = e.head;
        if self.parent_edge[head] == le {
            self.push(head);
        }
        self.process()
    }

    fn push(&mut self, v: NodeId) {
        if !self.queued[v] {
            self.queued[v] = true;
            self.heap.push(Reverse((self.levels[v], v)));
        }
    }

    fn process(&mut self) -> DropReport {
        let mut report = DropReport::default();
        while let Some(Reverse((_, x))) = self.heap.pop() {
            self.queued[x] = false;
            if self.levels[x] == INF {
                continue;
            }
            if self.find_tight_parent(x) {
                continue;
            }
            // No tight parent left: the level must grow.
            let mut best = INF;
            for &le in &self.in_lists[x] {
                self.work += 1;
                let e = &self.edges[le as usize];
                if e.alive && self.levels[e.tail] != INF {
                    best = best.min(self.levels[e.tail].saturating_add(e.w));
                }
            }
            self.ptr[x] = 0;
            if best > self.depth {
                self.levels[x] = INF;
                self.parent_edge[x] = NONE;
                report.dropped.push(x);
            } else {
                self.levels[x] = best;
                self.find_tight_parent(x);
            }
            let children: Vec<NodeId> = self.out_lists[x]
                .iter()
                .filter_map(|&le| {
                    let e = &self.edges[le as usize];
                    (e.alive && self.parent_edge[e.head] == le).then_some(e.head)
                })
                .collect();
            self.work += self.out_lists[x].len() as u64;
            for c in children {
                self.push(c);
            }
        }
        report.dropped.sort_unstable();
        report
    }
}
