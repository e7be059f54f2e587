mod common;

use common::{deletions, fixture, FIXTURE_DELETIONS};
use decremental::harness::Model;
use decremental::reductions::{charge_bound, tarjan_scc, EngineKind, Scc};
use decremental::{oracle, DecrementalGraph};
use proptest::prelude::*;

#[test]
fn fixture_partitions_frozen() {
    let mut scc = Scc::new(fixture(), EngineKind::Es, 1).unwrap();
    assert_eq!(scc.partition(), [0, 1, 2, 3, 3, 3, 6, 6]);
    let want = [[0, 1, 2, 3, 3, 3, 6, 6], [0, 1, 2, 3, 4, 5, 6, 6], [0, 1, 2, 3, 4, 5, 6, 6], [0, 1, 2, 3, 4, 5, 6, 6]];
    for ((u, v), row) in FIXTURE_DELETIONS.into_iter().zip(want) {
        scc.delete(u, v).unwrap();
        assert_eq!(scc.partition(), row);
    }
}

#[test]
fn hierarchical_engine_agrees() {
    for seed in 0..5 {
        let (g, order) = deletions(24, 72, Model::CycleHeavy, seed);
        let mut a = Scc::new(g.clone(), EngineKind::Es, seed).unwrap();
        let mut b = Scc::new(g, EngineKind::Hierarchical { k_sinks: 2.0 }, seed).unwrap();
        for (u, v) in order {
            a.delete(u, v).unwrap();
            b.delete(u, v).unwrap();
            assert_eq!(a.partition(), b.partition());
            assert_eq!(a.partition(), oracle::scc_partition(&a.graph().view()));
        }
    }
}

#[test]
fn charges_halve_components() {
    for seed in 0..30 {
        let n = 48;
        let (g, order) = deletions(n, 144, Model::CycleHeavy, seed);
        let mut scc = Scc::new(g, EngineKind::Es, seed).unwrap();
        for (u, v) in order {
            scc.delete(u, v).unwrap();
        }
        assert_eq!(scc.stats().halving_violations, 0);
        assert!(scc.charges().iter().all(|&c| c <= charge_bound(n)));
        assert_eq!(scc.component_count(), n);
    }
}

#[test]
fn representative_is_a_member() {
    let (g, order) = deletions(20, 60, Model::CycleHeavy, 3);
    let mut scc = Scc::new(g, EngineKind::Es, 3).unwrap();
    for (u, v) in order {
        scc.delete(u, v).unwrap();
        let part = scc.partition();
        for x in 0..20 {
            assert_eq!(part[scc.query(x)], part[x]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tarjan_matches_kosaraju(edges in prop::collection::btree_set((0usize..12, 0usize..12), 0..50)) {
        let list: Vec<_> = edges.into_iter().filter(|(u, v)| u != v).map(|(u, v)| (u, v, 1)).collect();
        let g = DecrementalGraph::new(12, &list, 1).unwrap();
        prop_assert_eq!(tarjan_scc(&g.view()), oracle::scc_partition(&g.view()));
    }

    #[test]
    fn maintained_partition_matches_oracle(
        edges in prop::collection::btree_set((0usize..10, 0usize..10), 1..45),
        seed in 0u64..1000,
    ) {
        let list: Vec<_> = edges.into_iter().filter(|(u, v)| u != v).map(|(u, v)| (u, v, 1)).collect();
        let mut g = DecrementalGraph::new(10, &list, 1).unwrap();
        let mut scc = Scc::new(g.clone(), EngineKind::Es, seed).unwrap();
        for (u, v, _) in list.iter().rev() {
            scc.delete(*u, *v).unwrap();
            g.delete_edge(*u, *v).unwrap();
            prop_assert_eq!(scc.partition(), oracle::scc_partition(&g.view()));
        }
        prop_assert_eq!(scc.stats().halving_violations, 0);
    }
}
