//! s-t reachability under deletions with an explicit two-level hierarchy.

use decremental::harness::{generate, Model, Op};
use decremental::sampling::SamplingConfig;
use decremental::schedule::ParamSchedule;
use decremental::st_reach::{StReach, StReachConfig};
use decremental::{oracle, INF};

fn main() -> Result<(), decremental::Error> {
    let (n, m) = (64, 256);
    let trace = generate(n, m, 1, Model::Uniform, 11)?;
    let cfg = StReachConfig {
        schedule: ParamSchedule::pinned(n as u64, m as u64, &[4, 2], &[16, 4])?,
        sampling: SamplingConfig::default(),
        seed: 11,
    };
    let mut r = StReach::new(trace.graph()?, 0, n - 1, &cfg)?;
    let mut last = r.query();
    println!("initially reachable: {last}");
    for (idx, (_, op)) in trace.ops.iter().enumerate() {
        if let Op::Delete(u, v) = *op {
            r.delete(u, v)?;
        }
        let truth = oracle::bfs_dist(&r.graph().view(), 0)[n - 1] != INF;
        assert_eq!(r.query(), truth);
        if r.query() != last {
            println!("update {}: {op} disconnects s from t", idx + 1);
            last = r.query();
        }
    }
    let s = r.stats();
    println!("refreshes {}, path unions {}, work {}", s.refreshes, s.path_unions, r.work());
    Ok(())
}
