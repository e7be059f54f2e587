//! Several (s, t) pairs sharing one center hierarchy.

use decremental::harness::{generate, Model, Op};
use decremental::sampling::SamplingConfig;
use decremental::schedule::{schedule_multipair, Variant};
use decremental::st_reach::{MultiPairReach, StReachConfig};

fn main() -> Result<(), decremental::Error> {
    let (n, m) = (48, 160);
    let pairs = [(0, 47), (5, 20), (13, 2), (30, 31)];
    let trace = generate(n, m, 1, Model::Uniform, 3)?;
    let cfg = StReachConfig {
        schedule: schedule_multipair(m as u64, n as u64, pairs.len() as f64, Variant::A)?,
        sampling: SamplingConfig::default(),
        seed: 3,
    };
    println!("{}", cfg.schedule.explain());
    let mut mp = MultiPairReach::new(trace.graph()?, &pairs, &cfg)?;
    for (idx, (_, op)) in trace.ops.iter().enumerate() {
        if let Op::Delete(u, v) = *op {
            mp.delete(u, v)?;
        }
        if (idx + 1) % 40 == 0 {
            let row: Vec<bool> = (0..mp.pair_count()).map(|j| mp.reachable(j)).collect();
            println!("after {:>3} deletions: {row:?}", idx + 1);
        }
    }
    Ok(())
}
