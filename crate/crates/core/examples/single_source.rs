//! Single-source reachability and approximate distances via sampled sinks.

use decremental::harness::{generate, Model, Op};
use decremental::reductions::{SingleSourceReach, SingleSourceSp, SsrConfig, SsspConfig};
use decremental::sampling::SamplingConfig;
use decremental::schedule::{schedule_st_sparse, ssr_pair_count, Variant};

fn main() -> Result<(), decremental::Error> {
    let (n, m) = (40, 120);
    let trace = generate(n, m, 1, Model::Uniform, 21)?;
    let k = ssr_pair_count(m as u64, n as u64, Variant::A);
    let mut ssr = SingleSourceReach::new(trace.graph()?, 0, &SsrConfig::new(k, 21))?;
    println!("sinks {:?}, hop bound {}", ssr.sinks(), ssr.hop_bound());
    for (_, op) in &trace.ops {
        if let Op::Delete(u, v) = *op {
            let dropped = ssr.delete(u, v)?;
            if !dropped.is_empty() {
                println!("{op}: lost {dropped:?}");
            }
        }
    }

    let (n, m) = (12, 30);
    let trace = generate(n, m, 8, Model::Uniform, 5)?;
    let cfg = SsspConfig {
        k_sinks: 1.0,
        eps: "1/2".parse()?,
        pair_schedule: schedule_st_sparse(m as u64, n as u64),
        sampling: SamplingConfig::default(),
        seed: 5,
    };
    let sp = SingleSourceSp::new(trace.graph()?, 0, &cfg)?;
    let est: Vec<String> = (0..n).map(|v| format!("{:.2}", sp.estimate_f64(v))).collect();
    println!("distance estimates from 0: {}", est.join(" "));
    Ok(())
}
