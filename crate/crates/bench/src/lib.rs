//! Synthetic transaction streams for the benchmarks.

use fpgt_core::Transaction;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// `count` transactions over `items` items, each item present independently
/// with probability `density`. Deterministic for a given seed.
pub fn uniform_stream(seed: u64, count: usize, items: usize, density: f64) -> Vec<Transaction> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let row = (0..items)
                .filter(|_| rng.gen_bool(density))
                .map(|j| format!("i{j:03}"));
            Transaction::new(i as u64 + 1, row)
        })
        .collect()
}

/// Like [`uniform_stream`], but item `j` appears with probability
/// `density / (1 + j)`, giving a few heavy items and a long tail.
pub fn skewed_stream(seed: u64, count: usize, items: usize, density: f64) -> Vec<Transaction> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let row = (0..items)
                .filter(|&j| rng.gen_bool((density / (1 + j) as f64).min(1.0)))
                .map(|j| format!("i{j:03}"));
            Transaction::new(i as u64 + 1, row)
        })
        .collect()
}
