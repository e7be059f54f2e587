//! Strongly connected components under deletions, with decomposition charges.

use decremental::harness::{generate, Model, Op};
use decremental::reductions::{charge_bound, EngineKind, Scc};

fn main() -> Result<(), decremental::Error> {
    let n = 32;
    let trace = generate(n, 96, 1, Model::CycleHeavy, 4)?;
    let mut scc = Scc::new(trace.graph()?, EngineKind::Es, 4)?;
    println!("initial components: {}", scc.component_count());
    for (_, op) in &trace.ops {
        if let Op::Delete(u, v) = *op {
            let before = scc.component_count();
            scc.delete(u, v)?;
            if scc.component_count() != before {
                println!("{op}: {} -> {} components", before, scc.component_count());
            }
        }
    }
    let s = scc.stats();
    println!(
        "decompositions {}, max charges per node {} (bound {}), halving violations {}",
        s.decompositions,
        s.max_charges,
        charge_bound(n),
        s.halving_violations
    );
    Ok(())
}
