#![allow(dead_code)]

use decremental::harness::{generate, Model, Op, Trace};
use decremental::{oracle, DecrementalGraph, NodeId, INF};

/// Full random-order deletion trace on a unit-weight graph.
pub fn deletions(n: usize, m: usize, model: Model, seed: u64) -> (DecrementalGraph, Vec<(NodeId, NodeId)>) {
    let t = generate(n, m, 1, model, seed).unwrap();
    let order = t
        .ops
        .iter()
        .filter_map(|(_, op)| match op {
            Op::Delete(u, v) => Some((*u, *v)),
            _ => None,
        })
        .collect();
    (t.graph().unwrap(), order)
}

/// Weighted trace with interleaved increases.
pub fn weighted(n: usize, m: usize, w: u64, seed: u64) -> Trace {
    generate(n, m, w, Model::Uniform, seed).unwrap()
}

pub fn reach_from(g: &DecrementalGraph, s: NodeId) -> Vec<bool> {
    oracle::bfs_dist(&g.view(), s).into_iter().map(|d| d != INF).collect()
}

/// Eight-node weighted fixture. The expected values in the tests were
/// computed with networkx, independently of this crate.
pub const FIXTURE: [(NodeId, NodeId, u64); 12] = [
    (0, 1, 3),
    (0, 2, 1),
    (2, 1, 1),
    (1, 3, 2),
    (2, 4, 5),
    (3, 4, 1),
    (4, 5, 2),
    (5, 3, 1),
    (3, 6, 4),
    (6, 7, 1),
    (7, 6, 2),
    (5, 7, 6),
];

pub const FIXTURE_DELETIONS: [(NodeId, NodeId); 4] = [(2, 1), (3, 4), (0, 2), (1, 3)];

pub fn fixture() -> DecrementalGraph {
    DecrementalGraph::new(8, &FIXTURE, 16).unwrap()
}

/// None marks unreachable in the frozen tables.
pub fn dist_row(d: &[u64]) -> Vec<Option<u64>> {
    d.iter().map(|&x| (x != INF).then_some(x)).collect()
}
