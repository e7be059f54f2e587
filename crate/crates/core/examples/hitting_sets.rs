//! Random hitting sets: how often every fixed subset is hit, and how large the sample is.

use decremental::sampling::{hitting_probability, sample_hitting_set, seeded_rng};
use rand::seq::SliceRandom;

fn main() {
    let (t, q, k, a) = (200, 20, 50, 2.0);
    let (x, p) = hitting_probability(t, q, k, a);
    println!("x = {x:.2}, p = {p:.3}, size cap {:.1}", 3.0 * x * t as f64 / q as f64);
    let mut rng = seeded_rng(1);
    let sets: Vec<Vec<usize>> = (0..k)
        .map(|_| {
            let mut all: Vec<usize> = (0..t).collect();
            all.shuffle(&mut rng);
            all[..q].to_vec()
        })
        .collect();
    let mut hit = 0;
    let mut sizes = Vec::new();
    for _ in 0..200 {
        let u = sample_hitting_set(t, q, k, a, &mut rng);
        hit += sets.iter().all(|s| s.iter().any(|v| u.contains(v))) as u32;
        sizes.push(u.len());
    }
    sizes.sort();
    println!("all sets hit in {hit}/200 draws; median size {}, max {}", sizes[100], sizes[199]);
}
