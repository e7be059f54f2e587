//! Independent reference computations used to check the dynamic structures.
//!
//! Nothing here shares code with the algorithms it checks.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::Error;
use crate::graph::{GraphView, NodeId, NodeSet, INF};

/// Hop distances from `s` (ignores weights).
pub fn bfs_dist(view: &GraphView, s: NodeId) -> Vec<u64> {
    let n = view.n();
    let mut dist = vec![INF; n];
    if !view.contains(s) {
        return dist;
    }
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        view.for_each_out(v, |_, u, _| {
            if dist[u] == INF {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        });
    }
    dist
}

/// Weighted distances from `s` using the view's weights.
pub fn dijkstra_dist(view: &GraphView, s: NodeId) -> Vec<u64> {
    let n = view.n();
    let mut dist = vec![INF; n];
    if !view.contains(s) {
        return dist;
    }
    dist[s] = 0;
    let mut heap = BinaryHeap::from([Reverse((0u64, s))]);
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        view.for_each_out(v, |_, u, w| {
            let nd = d.saturating_add(w);
            if nd < dist[u] {
                dist[u] = nd;
                heap.push(Reverse((nd, u)));
            }
        });
    }
    dist
}

/// Minimum weight over walks from `s` with at most `h` edges, for every
/// hop budget 0..=h. Row j holds dist^j.
pub fn bellman_ford_hops(view: &GraphView, s: NodeId, h: usize) -> Vec<Vec<u64>> {
    let n = view.n();
    let edges = view.edges();
    let mut rows = Vec::with_capacity(h + 1);
    let mut cur = vec![INF; n];
    if view.contains(s) {
        cur[s] = 0;
    }
    rows.push(cur.clone());
    for _ in 0..h {
        let mut next = cur.clone();
        for &(_, a, b, w) in &edges {
            if cur[a] != INF && cur[a] + w < next[b] {
                next[b] = cur[a] + w;
            }
        }
        let done = next == cur;
        cur = next;
        rows.push(cur.clone());
        if done {
            // Fixpoint reached: remaining rows are identical.
            while rows.len() < h + 1 {
                rows.push(cur.clone());
            }
            break;
        }
    }
    rows
}

/// dist^h from `s`, i.e. the last row of [`bellman_ford_hops`].
pub fn hop_dist(view: &GraphView, s: NodeId, h: usize) -> Vec<u64> {
    bellman_ford_hops(view, s, h).pop().unwrap()
}

/// Path union from distances: {v : d(x,v) + d(v,y) <= bound}.
pub fn path_union_by_distances(view: &GraphView, x: NodeId, y: NodeId, bound: u64) -> NodeSet {
    let fwd = dijkstra_dist(view, x);
    let bwd = dijkstra_dist(&view.clone().reversed(), y);
    NodeSet::from_nodes(
        view.n(),
        (0..view.n()).filter(|&v| fwd[v] != INF && bwd[v] != INF && fwd[v] + bwd[v] <= bound),
    )
}

/// Hop-bounded path union: nodes on some x-y walk of at most `h` edges and
/// weight at most `bound`.
pub fn hop_path_union(view: &GraphView, x: NodeId, y: NodeId, bound: u64, h: usize) -> NodeSet {
    let fwd = bellman_ford_hops(view, x, h);
    let bwd = bellman_ford_hops(&view.clone().reversed(), y, h);
    let n = view.n();
    let mut out = NodeSet::empty(n);
    for v in 0..n {
        let best = (0..=h)
            .filter_map(|a| {
                let (p, q) = (fwd[a][v], bwd[h - a][v]);
                (p != INF && q != INF).then(|| p + q)
            })
            .min();
        if best.is_some_and(|d| d <= bound) {
            out.insert(v);
        }
    }
    out
}

/// Exhaustive path union for tiny graphs: enumerates the exact walk weights
/// reachable from every node and combines them. Rejects n > 16 or bound > 4096.
pub fn brute_path_union(
    view: &GraphView,
    x: NodeId,
    y: NodeId,
    bound: u64,
    hop_cap: Option<usize>,
) -> Result<NodeSet, Error> {
    let n = view.n();
    if n > 16 {
        return Err(Error::Param(format!("brute_path_union supports n <= 16, got {n}")));
    }
    if bound > 4096 {
        return Err(Error::Param(format!("brute_path_union supports bound <= 4096, got {bound}")));
    }
    let d = bound as usize;
    let hops = hop_cap.unwrap_or(d).min(d);
    let edges = view.edges();
    // reach[s][j][w]: bitmask of nodes reachable from s by a walk of exactly
    // j edges and total weight w.
    let walks = |s: NodeId| -> Vec<Vec<u32>> {
        let mut layers = vec![vec![0u32; d + 1]; hops + 1];
        if view.contains(s) {
            layers[0][0] = 1 << s;
        }
        for j in 0..hops {
            for w in 0..=d {
                let mask = layers[j][w];
                if mask == 0 {
                    continue;
                }
                for &(_, a, b, ew) in &edges {
                    let nw = w + ew as usize;
                    if mask & (1 << a) != 0 && nw <= d {
                        layers[j + 1][nw] |= 1 << b;
                    }
                }
            }
        }
        layers
    };
    let from_x = walks(x);
    let mut out = NodeSet::empty(n);
    for v in 0..n {
        let from_v = walks(v);
        'search: for j1 in 0..=hops {
            for w1 in 0..=d {
                if from_x[j1][w1] & (1 << v) == 0 {
                    continue;
                }
                for j2 in 0..=hops - j1 {
                    for w2 in 0..=d - w1 {
                        if from_v[j2][w2] & (1 << y) != 0 {
                            out.insert(v);
                            break 'search;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Nodes reachable from `s`.
pub fn reachable_set(view: &GraphView, s: NodeId) -> NodeSet {
    let d = bfs_dist(view, s);
    NodeSet::from_nodes(view.n(), (0..view.n()).filter(|&v| d[v] != INF))
}

/// Strongly connected components by Kosaraju: comp[v] is the smallest node
/// id in v's component, so partitions compare with `==`.
pub fn scc_partition(view: &GraphView) -> Vec<NodeId> {
    let n = view.n();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] || !view.contains(s) {
            continue;
        }
        seen[s] = true;
        let mut stack: Vec<(NodeId, Vec<NodeId>, usize)> = Vec::new();
        let succ = |v: NodeId| {
            let mut out = Vec::new();
            view.for_each_out(v, |_, u, _| out.push(u));
            out
        };
        stack.push((s, succ(s), 0));
        while let Some(top) = stack.last_mut() {
            if top.2 < top.1.len() {
                let u = top.1[top.2];
                top.2 += 1;
                if !seen[u] {
                    seen[u] = true;
                    let su = succ(u);
                    stack.push((u, su, 0));
                }
            } else {
                order.push(top.0);
                stack.pop();
            }
        }
    }
    let rev = view.clone().reversed();
    let mut comp = vec![usize::MAX; n];
    for &s in order.iter().rev() {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut members = vec![s];
        comp[s] = s;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            i += 1;
            rev.for_each_out(v, |_, u, _| {
                if comp[u] == usize::MAX {
                    comp[u] = s;
                    members.push(u);
                }
            });
        }
        let label = *members.iter().min().unwrap();
        for &v in &members {
            comp[v] = label;
        }
    }
    comp
}
