//! Fixtures shared by the criterion benchmarks.

use nosignal_core::random::trial_rng;
use nosignal_core::{random_density, ComplexMatrix, DensityMatrix};

/// A reproducible Ginibre state of dimension `dim`.
pub fn fixture_state(dim: usize, seed: u64) -> DensityMatrix {
    random_density(dim, &mut trial_rng(seed, 0)).expect("valid dimension")
}

/// A reproducible Hermitian matrix `ρ - σ` of dimension `dim`.
pub fn fixture_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    let a = fixture_state(dim, seed);
    let b = fixture_state(dim, seed.wrapping_add(1));
    a.op() - b.op()
}
