mod common;

use common::{fixture, weighted};
use decremental::approx_sp::{ApproxSp, ApproxSpConfig};
use decremental::graph::RoundedWeightGraph;
use decremental::harness::Op;
use decremental::path_union::RoundingSpec;
use decremental::reductions::{SingleSourceSp, SsspConfig};
use decremental::sampling::SamplingConfig;
use decremental::scale::{int, round_weight_up, Eps};
use decremental::schedule::ParamSchedule;
use decremental::{oracle, DecrementalGraph, INF};
use num::BigRational;
use proptest::prelude::*;

fn run(sp: &mut ApproxSp, op: &Op) {
    match *op {
        Op::Delete(u, v) => sp.delete(u, v).unwrap(),
        Op::Increase(u, v, w) => sp.increase(u, v, w).unwrap(),
        Op::Query(_) => {}
    }
}

#[test]
fn fixture_distance_sandwich() {
    // dist(0, 7) = 9 in the fixture (networkx).
    let sched = ParamSchedule::pinned(8, 12, &[2, 1], &[4, 2]).unwrap();
    let sp = ApproxSp::new(fixture(), 0, 7, &ApproxSpConfig::new(sched, Eps::from_ratio(1, 2), 1)).unwrap();
    let d = sp.distance().unwrap();
    assert!(d >= &int(9) && d <= &(int(27) / int(2)));
}

#[test]
fn recalibrated_factor_within_target() {
    let sched = ParamSchedule::pinned(8, 12, &[2, 1], &[4, 2]).unwrap();
    let sp = ApproxSp::new(fixture(), 0, 7, &ApproxSpConfig::new(sched, Eps::from_ratio(1, 2), 1)).unwrap();
    assert_eq!(sp.internal_eps().value(), &(int(1) / int(20)));
    assert!(sp.internal_eps().pow(5) <= sp.target_eps().pow(1));
}

#[test]
fn weighted_traces_stay_sandwiched() {
    for seed in 0..6 {
        let n = 24;
        let trace = weighted(n, 80, 16, seed);
        let sched = ParamSchedule::pinned(24, 80, &[4, 2], &[8, 3]).unwrap();
        let cfg = ApproxSpConfig::new(sched, Eps::from_ratio(1, 2), seed);
        let mut sp = ApproxSp::new(trace.graph().unwrap(), 0, n - 1, &cfg).unwrap();
        for (_, op) in &trace.ops {
            run(&mut sp, op);
            let d = oracle::dijkstra_dist(&sp.graph().view(), 0)[n - 1];
            match sp.distance() {
                None => assert_eq!(d, INF),
                Some(e) => {
                    assert!(e >= &int(d));
                    assert!(e <= &(int(3) * int(d) / int(2)), "seed {seed}: {e} vs {d}");
                }
            }
        }
        let rep = sp.check_invariants();
        assert_eq!(rep.i1_violations + rep.i2_violations, 0);
    }
}

#[test]
fn single_source_estimates_sandwiched() {
    let n = 10;
    let trace = weighted(n, 24, 8, 4);
    let cfg = SsspConfig {
        k_sinks: 1.0,
        eps: Eps::from_ratio(1, 2),
        pair_schedule: ParamSchedule::pinned(10, 24, &[2, 1], &[4, 2]).unwrap(),
        sampling: SamplingConfig::default(),
        seed: 4,
    };
    let mut sp = SingleSourceSp::new(trace.graph().unwrap(), 0, &cfg).unwrap();
    let factor = Eps::from_ratio(1, 2).pow(2);
    for (_, op) in &trace.ops {
        match *op {
            Op::Delete(u, v) => sp.delete(u, v).unwrap(),
            Op::Increase(u, v, w) => sp.increase(u, v, w).unwrap(),
            Op::Query(_) => {}
        }
        let d = oracle::dijkstra_dist(&sp.graph().view(), 0);
        for v in 0..n {
            match sp.estimate(v) {
                None => assert_eq!(d[v], INF),
                Some(e) => assert!(e >= int(d[v]) && e <= &factor * int(d[v])),
            }
        }
    }
}

#[test]
fn power_rounding_frozen() {
    // floor((1 + 1/2)^(i+1)) for (1+1/2)^i <= w < (1+1/2)^(i+1).
    let eps = Eps::from_ratio(1, 2);
    let got: Vec<u64> = (1..=12).map(|w| round_weight_up(w, &eps)).collect();
    assert_eq!(got, [1, 2, 3, 5, 5, 7, 7, 11, 11, 11, 11, 17]);
}

#[test]
fn rounded_graph_caps_emitted_increases() {
    let eps = Eps::from_ratio(1, 4);
    let mut g = DecrementalGraph::new(2, &[(0, 1, 1)], 64).unwrap();
    let mut rg = RoundedWeightGraph::new(&g, eps.clone()).unwrap();
    for w in 2..=64 {
        let up = g.increase_weight(0, 1, w).unwrap();
        rg.apply(&up).unwrap();
        let r = rg.graph().weight(0, 1).unwrap();
        assert!(r >= w && int(r) <= eps.pow(1) * int(w));
    }
    assert!(rg.max_emitted() as i64 <= eps.ceil_log_int(64));
}

proptest! {
    #[test]
    fn hop_rounding_per_path_bound(ws in prop::collection::vec(1u64..50, 1..6), extra in 0i64..3) {
        let eps = Eps::from_ratio(1, 3);
        let h = ws.len() as u64 + extra as u64;
        let w: u64 = ws.iter().sum();
        for r in 0..=eps.floor_log(&int(w)) {
            let spec = RoundingSpec::new(eps.clone(), int(h), r);
            let rounded: BigRational = ws.iter().map(|&e| spec.rounded_weight(e)).sum();
            prop_assert!(rounded >= int(w));
            prop_assert!(rounded <= eps.pow(1) * int(w));
        }
    }

    #[test]
    fn rounding_sandwich(w in 1u64..100_000, num in 1i64..5, den in 2i64..20) {
        let eps = Eps::from_ratio(num, den);
        let r = round_weight_up(w, &eps);
        prop_assert!(r >= w);
        prop_assert!(int(r) <= eps.pow(1) * int(w));
    }
}
