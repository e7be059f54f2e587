//! (1+eps)-approximate s-t distance under deletions and weight increases.

use decremental::approx_sp::{ApproxSp, ApproxSpConfig};
use decremental::harness::{generate, Model, Op};
use decremental::schedule::ParamSchedule;
use decremental::{oracle, INF};

fn main() -> Result<(), decremental::Error> {
    let (n, m) = (32, 128);
    let trace = generate(n, m, 16, Model::Uniform, 8)?;
    let sched = ParamSchedule::pinned(n as u64, m as u64, &[4, 2], &[8, 3])?;
    let cfg = ApproxSpConfig::new(sched, "1/2".parse()?, 8);
    let mut sp = ApproxSp::new(trace.graph()?, 0, n - 1, &cfg)?;
    println!("target eps {:?}, internal eps {:?}", sp.target_eps().to_f64(), sp.internal_eps().to_f64());
    for (idx, (_, op)) in trace.ops.iter().enumerate() {
        match *op {
            Op::Delete(u, v) => sp.delete(u, v)?,
            Op::Increase(u, v, w) => sp.increase(u, v, w)?,
            Op::Query(_) => continue,
        }
        if idx % 20 == 0 {
            let d = oracle::dijkstra_dist(&sp.graph().view(), 0)[n - 1];
            let exact = if d == INF { "inf".to_string() } else { d.to_string() };
            println!("update {:>3} {:<10} estimate {:>8.3} exact {exact}", idx + 1, op.to_string(), sp.distance_f64());
        }
    }
    println!("{:?}", sp.stats());
    Ok(())
}
