//! Dense single-source reachability: terminal pairs answered through a center graph.

use decremental::dense_ssr::{DenseConfig, DenseSsr};
use decremental::harness::{generate, Model, Op};
use decremental::sampling::SamplingConfig;
use decremental::schedule::ParamSchedule;

fn main() -> Result<(), decremental::Error> {
    let (n, m) = (48, 700);
    let trace = generate(n, m, 1, Model::Uniform, 2)?;
    let terminals = [0, 9, 17, 33];
    let cfg = DenseConfig {
        schedule: ParamSchedule::pinned(n as u64, m as u64, &[1, 1], &[4, 1])?,
        sampling: SamplingConfig::default(),
        seed: 2,
    };
    let mut d = DenseSsr::new(trace.graph()?, &terminals, &cfg)?;
    println!("{} centers", d.center_count());
    for (idx, (_, op)) in trace.ops.iter().enumerate() {
        if let Op::Delete(u, v) = *op {
            d.delete(u, v)?;
        }
        if (idx + 1) % 175 == 0 {
            let mut rows = Vec::new();
            for &x in &terminals {
                let row: String = terminals.iter().map(|&y| if d.query(x, y).unwrap() { '1' } else { '.' }).collect();
                rows.push(row);
            }
            println!("after {:>3} deletions: {}", idx + 1, rows.join(" "));
        }
    }
    println!("{:?}", d.stats());
    Ok(())
}
