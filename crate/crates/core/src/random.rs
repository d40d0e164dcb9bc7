//! Seeded random constructors shared by the state and channel modules.
//!
//! Every campaign derives one ChaCha stream per trial from `(seed, trial)`,
//! so results do not depend on the order in which trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{inner, norm, ComplexMatrix, C64};
use crate::state::PureState;

pub type TrialRng = ChaCha8Rng;

/// The RNG stream for trial `index` of a campaign seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<ComplexMatrix> {
    let data = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::new(rows, cols, data)
}

/// A `rows x cols` matrix with orthonormal columns (`rows >= cols`),
/// Gram-Schmidt orthonormalized from a Gaussian draw. The implied R factor has
/// a positive diagonal, so the result is Haar distributed.
pub fn random_isometry<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let g = ginibre(rows, cols, rng)?;
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = g.column(j);
        // Two passes keep the columns orthonormal to machine precision.
        for _ in 0..2 {
            for u in &basis {
                let c = inner(u, &v);
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= c * ui;
                }
            }
        }
        let n = norm(&v);
        v.iter_mut().for_each(|z| *z /= n);
        basis.push(v);
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for (j, col) in basis.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            out[(i, j)] = *z;
        }
    }
    Ok(out)
}

pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<ComplexMatrix> {
    random_isometry(dim, dim, rng)
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    let mut v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    let n = norm(&v);
    v.iter_mut().for_each(|z| *z /= n);
    PureState::new(v).expect("normalized Gaussian vector")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_streams_are_reproducible_and_distinct() {
        let a: u64 = trial_rng(7, 3).random();
        let b: u64 = trial_rng(7, 3).random();
        let c: u64 = trial_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn isometry_columns_are_orthonormal() {
        let mut rng = trial_rng(1, 0);
        let v = random_isometry(12, 3, &mut rng).unwrap();
        let gram = &v.adjoint() * &v;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-13);
    }
}
