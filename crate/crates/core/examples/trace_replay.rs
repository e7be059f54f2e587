//! Generate a trace, write it, parse it back and replay it with verification.

use decremental::harness::{generate, replay, Algo, Model, RunConfig, Trace};

fn main() -> Result<(), decremental::Error> {
    let trace = generate(16, 40, 1, Model::LayeredDag, 6)?;
    let text = trace.to_text();
    println!("{}", text.lines().take(4).collect::<Vec<_>>().join("\n"));
    let parsed = Trace::parse(&text)?;

    let mut cfg = RunConfig::new(Algo::Ssr, 6);
    cfg.counters = true;
    let report = replay(&parsed, &cfg)?;
    assert!(report.mismatch.is_none());
    let csv = report.csv();
    for line in csv.lines().take(5) {
        println!("{line}");
    }
    println!("... {} rows, {} checks, {} updates", report.rows.len(), report.checks, report.updates);
    Ok(())
}
