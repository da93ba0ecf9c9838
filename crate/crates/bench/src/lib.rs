//! Fixtures shared by the benchmarks.

use crystal_core::ktheory::IntMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic square matrix with entries in `[-bound, bound]`.
pub fn random_matrix(n: usize, bound: i64, seed: u64) -> IntMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_i64(&rows, n).expect("square")
}
