//! Parameter schedules: formula-driven and pinned.

use decremental::schedule::{dense_pairing, schedule_dense, schedule_multipair, schedule_st_sparse, ParamSchedule, Variant};

fn main() -> Result<(), decremental::Error> {
    let (n, m) = (1u64 << 12, 1u64 << 15);
    println!("{}", schedule_st_sparse(m, n).explain());
    println!("{}", schedule_multipair(m, n, 16.0, Variant::A)?.explain());
    println!("{}", schedule_dense(m, n, dense_pairing(m, n, 0))?.explain());
    let p = ParamSchedule::pinned(64, 512, &[8, 4], &[16, 4])?;
    println!("{}", p.explain());
    println!("monotone: {}", p.is_monotone());
    Ok(())
}
