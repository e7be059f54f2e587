//! Path unions P(x, y, D) = {v : d(x,v) + d(v,y) <= D}, their hop-rounded
//! variants, and deterministic shortest paths inside induced subgraphs.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use num::rational::BigRational;

use crate::graph::{GraphView, NodeId, NodeSet, WeightTransform, INF};
use crate::scale::{Eps, Scaler};

/// Single-source distances in the view, BFS for unit views and Dijkstra
/// otherwise. Distances above `limit` are reported as INF.
pub fn distances(view: &GraphView, s: NodeId, limit: u64) -> (Vec<u64>, u64) {
    let n = view.n();
    let mut dist = vec![INF; n];
    let mut work = 0u64;
    if !view.contains(s) {
        return (dist, work);
    }
    dist[s] = 0;
    if view.transform.is_unit() {
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            if dist[v] >= limit {
                continue;
            }
            view.for_each_out(v, |_, u, _| {
                work += 1;
                if dist[u] == INF {
                    dist[u] = dist[v] + 1;
                    q.push_back(u);
                }
            });
        }
    } else {
        let mut heap = BinaryHeap::from([Reverse((0u64, s))]);
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            view.for_each_out(v, |_, u, w| {
                work += 1;
                let nd = d.saturating_add(w);
                if nd <= limit && nd < dist[u] {
                    dist[u] = nd;
                    heap.push(Reverse((nd, u)));
                }
            });
        }
    }
    (dist, work)
}

/// Exact path union in the view. Returns the set and the number of edge scans.
pub fn path_union(view: &GraphView, x: NodeId, y: NodeId, bound: u64) -> (NodeSet, u64) {
    let (fwd, w1) = distances(view, x, bound);
    let (bwd, w2) = distances(&view.clone().reversed(), y, bound);
    let set = NodeSet::from_nodes(
        view.n(),
        (0..view.n()).filter(|&v| fwd[v] != INF && bwd[v] != INF && fwd[v] + bwd[v] <= bound),
    );
    (set, w1 + w2)
}

/// True if `after` is contained in `before`, which must hold for path unions
/// of the same pair and bound across deletions and increases.
pub fn is_monotone(before: &NodeSet, after: &NodeSet) -> bool {
    after.is_subset(before)
}

/// Parameters of the hop-rounded graph G~(h, r): every weight w becomes
/// ceil(w * h / (eps (1+eps)^r)) * eps (1+eps)^r / h.
#[derive(Clone, Debug)]
pub struct RoundingSpec {
    pub eps: Eps,
    pub h: BigRational,
    pub r: i64,
}

impl RoundingSpec {
    pub fn new(eps: Eps, h: BigRational, r: i64) -> Self {
        RoundingSpec { eps, h, r }
    }

    pub fn scaler(&self) -> Scaler {
        Scaler::hop_rounding(&self.eps, &self.h, self.r)
    }

    pub fn transform(&self) -> WeightTransform {
        WeightTransform::Scaled(self.scaler())
    }

    /// Rounded weight of a single edge as an exact rational.
    pub fn rounded_weight(&self, w: u64) -> BigRational {
        let s = self.scaler();
        s.to_real(s.units(w))
    }

    /// Largest number of units whose real value is at most alpha * (1+eps)^exp.
    pub fn units_within(&self, alpha: &BigRational, exp: i64) -> u64 {
        self.scaler().floor_units(&(alpha * self.eps.pow(exp)))
    }
}

/// P(x, y, alpha (1+eps)^(r+1), G~(h, r)[Q]).
pub fn rounded_path_union(
    view: &GraphView,
    x: NodeId,
    y: NodeId,
    alpha: &BigRational,
    spec: &RoundingSpec,
) -> NodeSet {
    let bound = spec.units_within(alpha, spec.r + 1);
    let scaled = view.clone().with_transform(spec.transform());
    path_union(&scaled, x, y, bound).0
}

/// Shortest x-y path in the view with deterministic tie-breaking: among
/// equally short predecessors the smallest node id wins. Returns the length
/// (in view weights) and the node sequence.
pub fn shortest_path(view: &GraphView, x: NodeId, y: NodeId) -> Option<(u64, Vec<NodeId>)> {
    let n = view.n();
    if !view.contains(x) || !view.contains(y) {
        return None;
    }
    let mut dist = vec![INF; n];
    let mut pred = vec![usize::MAX; n];
    dist[x] = 0;
    let mut heap = BinaryHeap::from([Reverse((0u64, x))]);
    let mut done = vec![false; n];
    while let Some(Reverse((d, v))) = heap.pop() {
        if done[v] || d > dist[v] {
            continue;
        }
        done[v] = true;
        if v == y {
            break;
        }
        view.for_each_out(v, |_, u, w| {
            let nd = d.saturating_add(w);
            if nd < dist[u] || (nd == dist[u] && !done[u] && v < pred[u]) {
                if nd < dist[u] {
                    heap.push(Reverse((nd, u)));
                }
                dist[u] = nd;
                pred[u] = v;
            }
        });
    }
    if dist[y] == INF {
        return None;
    }
    let mut path = vec![y];
    let mut v = y;
    while v != x {
        v = pred[v];
        path.push(v);
    }
    path.reverse();
    Some((dist[y], path))
}
