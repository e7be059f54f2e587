mod common;

use common::{deletions, fixture, reach_from, FIXTURE_DELETIONS};
use decremental::dense_ssr::{DenseConfig, DenseSsr};
use decremental::harness::Model;
use decremental::reductions::{sample_sinks, SingleSourceReach, SsrConfig};
use decremental::sampling::{seeded_rng, SamplingConfig};
use decremental::schedule::{schedule_multipair, ssr_pair_count, ParamSchedule, Variant};
use decremental::st_reach::{MultiPairReach, StReach, StReachConfig};

fn st_cfg(n: usize, m: usize, b: &[u64], c: &[u64], seed: u64) -> StReachConfig {
    StReachConfig { schedule: ParamSchedule::pinned(n as u64, m as u64, b, c).unwrap(), sampling: SamplingConfig::default(), seed }
}

#[test]
fn fixture_st_answers_frozen() {
    // Reachability of 7 from 0 after each fixture deletion (networkx): yes, yes, yes, no.
    let mut r = StReach::new(fixture(), 0, 7, &st_cfg(8, 12, &[2, 1], &[4, 2], 1)).unwrap();
    assert!(r.query());
    for ((u, v), want) in FIXTURE_DELETIONS.into_iter().zip([true, true, true, false]) {
        r.delete(u, v).unwrap();
        assert_eq!(r.query(), want);
    }
}

#[test]
fn fixture_ssr_frozen() {
    let want: [[bool; 8]; 4] = [
        [true; 8],
        [true; 8],
        [true, true, false, true, false, false, true, true],
        [true, true, false, false, false, false, false, false],
    ];
    let mut ssr = SingleSourceReach::new(fixture(), 0, &SsrConfig::new(2.0, 3)).unwrap();
    for ((u, v), row) in FIXTURE_DELETIONS.into_iter().zip(want) {
        ssr.delete(u, v).unwrap();
        assert_eq!((0..8).map(|x| ssr.query(x)).collect::<Vec<_>>(), row);
    }
}

#[test]
fn st_reach_random_with_structure_checks() {
    for seed in 0..12 {
        let (n, m) = (32, 96);
        let (g, order) = deletions(n, m, Model::Uniform, seed);
        let mut r = StReach::new(g, 0, n - 1, &st_cfg(n, m, &[3, 2], &[8, 3], seed)).unwrap();
        for (u, v) in order {
            r.delete(u, v).unwrap();
            assert_eq!(r.query(), reach_from(r.graph(), 0)[n - 1], "seed {seed}");
        }
        let s = r.stats();
        assert_eq!(s.subset_violations + s.overlap_violations + s.parent_violations, 0);
    }
}

#[test]
fn multi_pair_matches_oracle() {
    let (n, m) = (32, 128);
    let pairs = [(0, 31), (4, 9), (17, 2), (9, 4)];
    for seed in 0..6 {
        let (g, order) = deletions(n, m, Model::LayeredDag, seed);
        let cfg = StReachConfig {
            schedule: schedule_multipair(m as u64, n as u64, pairs.len() as f64, Variant::A).unwrap(),
            sampling: SamplingConfig::default(),
            seed,
        };
        let mut mp = MultiPairReach::new(g, &pairs, &cfg).unwrap();
        for (u, v) in order {
            mp.delete(u, v).unwrap();
            for (j, &(x, y)) in pairs.iter().enumerate() {
                assert_eq!(mp.reachable(j), reach_from(mp.graph(), x)[y]);
            }
        }
    }
}

#[test]
fn ssr_drops_are_exactly_the_newly_unreachable() {
    for seed in 0..10 {
        let (n, m) = (40, 120);
        let (g, order) = deletions(n, m, Model::Uniform, seed);
        let k = ssr_pair_count(m as u64, n as u64, Variant::A);
        let mut ssr = SingleSourceReach::new(g, 0, &SsrConfig::new(k, seed)).unwrap();
        let mut before = reach_from(ssr.graph(), 0);
        for (u, v) in order {
            let dropped = ssr.delete(u, v).unwrap();
            let after = reach_from(ssr.graph(), 0);
            let want: Vec<usize> = (0..n).filter(|&x| before[x] && !after[x]).collect();
            assert_eq!(dropped, want, "seed {seed}");
            before = after;
        }
    }
}

#[test]
fn sampled_sinks_skip_source() {
    let mut rng = seeded_rng(9);
    for _ in 0..20 {
        let t = sample_sinks(50, 7, 3.0, 50, 2.0, &mut rng);
        assert!(!t.contains(&7));
        assert!(t.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn dense_terminal_matrix_matches_oracle() {
    for seed in 0..4 {
        let (n, m) = (32, 400);
        let (g, order) = deletions(n, m, Model::Uniform, seed);
        let terms = [0, 5, 11, 20, 31];
        let cfg = DenseConfig {
            schedule: ParamSchedule::pinned(n as u64, m as u64, &[1, 1], &[4, 1]).unwrap(),
            sampling: SamplingConfig::default(),
            seed,
        };
        let mut d = DenseSsr::new(g, &terms, &cfg).unwrap();
        for (u, v) in order {
            d.delete(u, v).unwrap();
            for &x in &terms {
                let truth = reach_from(d.graph(), x);
                for &y in &terms {
                    assert_eq!(d.query(x, y).unwrap(), truth[y]);
                }
            }
        }
        assert_eq!(d.stats().monotonicity_violations, 0);
        let links = d.check_links();
        assert_eq!(links.unsound, 0);
    }
}
