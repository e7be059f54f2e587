//! Approximate path unions from a fixed source x.
//!
//! A query for target y returns F with P(x, y, h) within F within
//! P(x, y, (log m + 3) h). Nodes that provably lie farther than h from x
//! are removed from the candidate set R(x) so later queries get cheaper.

use std::collections::VecDeque;

use crate::graph::{DecrementalGraph, NodeId, NodeSet, INF};
use crate::oracle;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ApuLedger {
    pub queries: u64,
    /// Edge scans performed by all queries.
    pub work: u64,
    /// Sum of |E[F]| over all returned sets.
    pub returned_edges: u64,
    /// Edges incident to nodes removed from R.
    pub removed_edges: u64,
}

pub const LEDGER_HEADER: &str = "source,h,queries,work,returned_edges,removed_edges";

impl ApuLedger {
    pub fn csv_row(&self, x: NodeId, h: u64) -> String {
        format!("{x},{h},{},{},{},{}", self.queries, self.work, self.returned_edges, self.removed_edges)
    }
}

#[derive(Clone, Debug)]
pub struct ApproxPathUnion {
    x: NodeId,
    h: u64,
    log_m: u64,
    r: NodeSet,
    audit: bool,
    audit_failures: u64,
    removed: Vec<(NodeId, u64)>,
    ledger: ApuLedger,
}

/// Constant in the documented ledger bound work <= C (sum |E[F]| + removed edges + m).
pub const APU_WORK_CONSTANT: u64 = 8;

impl ApproxPathUnion {
    pub fn new(g: &DecrementalGraph, x: NodeId, h: u64) -> Self {
        let m = g.m_initial().max(1) as f64;
        let log_m = (m.log2().ceil() as u64).max(1);
        ApproxPathUnion {
            x,
            h,
            log_m,
            r: NodeSet::full(g.n()),
            audit: false,
            audit_failures: 0,
            removed: Vec::new(),
            ledger: ApuLedger::default(),
        }
    }

    /// With auditing on, every removed node is checked against an oracle BFS
    /// at removal time.
    pub fn with_audit(mut self, audit: bool) -> Self {
        self.audit = audit;
        self
    }

    pub fn source(&self) -> NodeId {
        self.x
    }

    pub fn h(&self) -> u64 {
        self.h
    }

    pub fn candidates(&self) -> &NodeSet {
        &self.r
    }

    pub fn ledger(&self) -> &ApuLedger {
        &self.ledger
    }

    /// Removed nodes with the graph epoch at removal time.
    pub fn removal_log(&self) -> &[(NodeId, u64)] {
        &self.removed
    }

    /// True iff every removed node was farther than h from x when removed.
    pub fn audit_removals(&self) -> bool {
        self.audit_failures == 0
    }

    /// Sandwich factor: returned sets lie inside P(x, y, factor * h).
    pub fn outer_factor(&self) -> u64 {
        self.log_m + 2
    }

    pub fn query(&mut self, g: &DecrementalGraph, y: NodeId) -> NodeSet {
        self.ledger.queries += 1;
        let n = g.n();
        if !self.r.contains(y) {
            return NodeSet::empty(n);
        }
        // Backward BFS from y inside G[R], grown one band of h levels at a time.
        let mut dist = vec![INF; n];
        let mut in_b = NodeSet::empty(n);
        dist[y] = 0;
        in_b.insert(y);
        let mut frontier = VecDeque::from([y]);
        let mut edges_in_b = 0u64;
        let grow = |limit: u64, frontier: &mut VecDeque<NodeId>, dist: &mut Vec<u64>, in_b: &mut NodeSet, edges_in_b: &mut u64, work: &mut u64| {
            let mut next = VecDeque::new();
            while let Some(v) = frontier.pop_front() {
                if dist[v] >= limit {
                    next.push_back(v);
                    continue;
                }
                for (_, e) in g.in_edges(v) {
                    *work += 1;
                    let u = e.from;
                    if !self.r.contains(u) || in_b.contains(u) {
                        continue;
                    }
                    dist[u] = dist[v] + 1;
                    in_b.insert(u);
                    // Count edges between u and nodes already in B.
                    for (_, e2) in g.out_edges(u) {
                        *work += 1;
                        if in_b.contains(e2.to) && e2.to != u {
                            *edges_in_b += 1;
                        }
                    }
                    for (_, e2) in g.in_edges(u) {
                        *work += 1;
                        if in_b.contains(e2.from) && e2.from != u {
                            *edges_in_b += 1;
                        }
                    }
                    frontier.push_back(u);
                }
            }
            *frontier = next;
        };
        let mut work = 0u64;
        grow(self.h, &mut frontier, &mut dist, &mut in_b, &mut edges_in_b, &mut work);
        let mut prev_b = in_b.clone();
        let mut prev_edges = edges_in_b;
        for i in 2..=self.log_m + 1 {
            grow(i * self.h, &mut frontier, &mut dist, &mut in_b, &mut edges_in_b, &mut work);
            if edges_in_b <= 2 * prev_edges {
                break;
            }
            if i < self.log_m + 1 {
                prev_b = in_b.clone();
                prev_edges = edges_in_b;
            }
        }
        // Forward BFS from x inside G[B_i*] up to h.
        let mut f = NodeSet::empty(n);
        if in_b.contains(self.x) {
            let mut fd = vec![INF; n];
            fd[self.x] = 0;
            f.insert(self.x);
            let mut q = VecDeque::from([self.x]);
            while let Some(v) = q.pop_front() {
                if fd[v] >= self.h {
                    continue;
                }
                for (_, e) in g.out_edges(v) {
                    work += 1;
                    if in_b.contains(e.to) && fd[e.to] == INF {
                        fd[e.to] = fd[v] + 1;
                        f.insert(e.to);
                        q.push_back(e.to);
                    }
                }
            }
        }
        // X = B_{i*-1} \ F leaves R.
        let mut x_set = prev_b;
        x_set.difference_with(&f);
        if !x_set.is_empty() {
            let truth = self.audit.then(|| oracle::bfs_dist(&g.view(), self.x));
            for v in x_set.iter() {
                self.removed.push((v, g.epoch()));
                self.ledger.removed_edges += (g.out_degree(v) + g.in_edges(v).count()) as u64;
                if let Some(d) = &truth {
                    if d[v] <= self.h {
                        self.audit_failures += 1;
                    }
                }
            }
            self.r.difference_with(&x_set);
        }
        self.ledger.returned_edges += f.iter().map(|v| g.out_edges(v).filter(|(_, e)| f.contains(e.to)).count() as u64).sum::<u64>();
        self.ledger.work += work;
        f
    }

    /// Ledger bound with the documented constant.
    pub fn ledger_within_bound(&self, m: u64) -> bool {
        self.ledger.work
            <= APU_WORK_CONSTANT * (self.ledger.returned_edges + self.ledger.removed_edges + m * self.ledger.queries.max(1))
    }
}
