//! No-cloning checks.
//!
//! A unitary `U |ψ>|0> = |ψ>|ψ>` for two states forces
//! `<ψ|φ> = <ψ|φ>²`, so the overlap magnitude must be exactly 0 or 1.
//! [`channel_cloning_residual`] measures how far a given channel falls short
//! of duplicating a set of test states.

use crate::channel::{apply_channel, trace_distance, KrausChannel};
use crate::error::{Error, Result};
use crate::linalg::{tensor_vec, ComplexMatrix, C64};
use crate::state::{DensityMatrix, PureState};

/// Overlaps within this distance of 0 or 1 count as clonable.
pub const OVERLAP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CloningVerdict {
    pub clonable: bool,
    pub overlap: f64,
}

pub fn cloning_consistency_witness(psi: &PureState, phi: &PureState) -> Result<CloningVerdict> {
    if psi.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            context: "cloning witness",
            expected: psi.dim(),
            found: phi.dim(),
        });
    }
    let overlap = psi.inner(phi).norm().min(1.0);
    Ok(CloningVerdict {
        clonable: overlap <= OVERLAP_TOL || overlap >= 1.0 - OVERLAP_TOL,
        overlap,
    })
}

/// Worst trace distance between `Λ(|ψ><ψ|)` and `|ψ><ψ| ⊗ |ψ><ψ|` over the test states.
pub fn channel_cloning_residual(ch: &KrausChannel, test_states: &[PureState]) -> Result<f64> {
    if test_states.is_empty() {
        return Err(Error::InvalidArgument(
            "need at least one test state".into(),
        ));
    }
    let mut worst = 0.0f64;
    for psi in test_states {
        let d = psi.dim();
        if ch.dim_in() != d || ch.dim_out() != d * d {
            return Err(Error::DimensionMismatch {
                context: "cloning channel",
                expected: d,
                found: ch.dim_in(),
            });
        }
        let produced = apply_channel(ch, &psi.density())?;
        let target = DensityMatrix::from_pure(&tensor_vec(psi.amplitudes(), psi.amplitudes()))?;
        worst = worst.max(trace_distance(&produced, &target)?);
    }
    Ok(worst)
}

/// The isometry `|i> ↦ |i>|i>`, which copies computational basis states exactly.
pub fn basis_copier(dim: usize) -> Result<KrausChannel> {
    let mut k = ComplexMatrix::zeros(dim * dim, dim);
    for i in 0..dim {
        k[(i * dim + i, i)] = C64::new(1.0, 0.0);
    }
    KrausChannel::new(vec![k])
}

/// `ρ ↦ ρ ⊗ |0><0|`: attaches a blank ancilla without copying anything.
pub fn append_blank(dim: usize) -> Result<KrausChannel> {
    let mut k = ComplexMatrix::zeros(dim * dim, dim);
    for i in 0..dim {
        k[(i * dim, i)] = C64::new(1.0, 0.0);
    }
    KrausChannel::new(vec![k])
}

/// Two pure states of dimension `dim` with `|<ψ|φ>| = overlap` and random
/// relative orientation.
pub fn pair_with_overlap<R: rand::Rng + ?Sized>(
    dim: usize,
    overlap: f64,
    rng: &mut R,
) -> Result<(PureState, PureState)> {
    use crate::linalg::{inner, norm};
    use crate::random::random_pure_state;

    if !(0.0..=1.0).contains(&overlap) {
        return Err(Error::InvalidArgument(format!(
            "overlap {overlap} outside [0, 1]"
        )));
    }
    let psi = random_pure_state(dim, rng);
    // Component of a second random vector orthogonal to ψ.
    let mut perp = random_pure_state(dim, rng).amplitudes().to_vec();
    let c = inner(psi.amplitudes(), &perp);
    for (p, a) in perp.iter_mut().zip(psi.amplitudes()) {
        *p -= c * a;
    }
    let n = norm(&perp);
    perp.iter_mut().for_each(|z| *z /= n);
    let phase = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    let sin = (1.0 - overlap * overlap).sqrt();
    let phi: Vec<C64> = psi
        .amplitudes()
        .iter()
        .zip(&perp)
        .map(|(a, p)| a * overlap * phase + p * sin)
        .collect();
    Ok((psi, PureState::new(phi)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::random_channel_between;
    use crate::random::trial_rng;

    #[test]
    fn orthogonal_states_are_clonable() {
        let v =
            cloning_consistency_witness(&PureState::basis(2, 0), &PureState::basis(2, 1)).unwrap();
        assert!(v.clonable);
        assert_eq!(v.overlap, 0.0);
    }

    #[test]
    fn identical_states_are_clonable() {
        let v =
            cloning_consistency_witness(&PureState::basis(2, 0), &PureState::basis(2, 0)).unwrap();
        assert!(v.clonable);
        assert_eq!(v.overlap, 1.0);
    }

    #[test]
    fn zero_and_plus_are_not_clonable() {
        let v = cloning_consistency_witness(&PureState::basis(2, 0), &PureState::plus()).unwrap();
        assert!(!v.clonable);
        assert!((v.overlap - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn witness_rejects_dimension_mismatch() {
        assert!(
            cloning_consistency_witness(&PureState::basis(2, 0), &PureState::basis(3, 0)).is_err()
        );
    }

    #[test]
    fn blank_ancilla_clones_zero_only() {
        let ch = append_blank(2).unwrap();
        assert!(channel_cloning_residual(&ch, &[PureState::basis(2, 0)]).unwrap() < 1e-15);
        assert!(channel_cloning_residual(&ch, &[PureState::basis(2, 1)]).unwrap() > 0.99);
    }

    #[test]
    fn basis_copier_clones_orthogonal_pair() {
        let ch = basis_copier(2).unwrap();
        let r = channel_cloning_residual(&ch, &[PureState::basis(2, 0), PureState::basis(2, 1)])
            .unwrap();
        assert!(r <= 1e-9);
        // ...but not |+>, which it turns into the cat state (|00> + |11>)/√2.
        assert!(channel_cloning_residual(&ch, &[PureState::plus()]).unwrap() > 0.5);
    }

    #[test]
    fn residual_dimension_checks() {
        let ch = basis_copier(2).unwrap();
        assert!(channel_cloning_residual(&ch, &[PureState::basis(3, 0)]).is_err());
        assert!(channel_cloning_residual(&ch, &[]).is_err());
        let wrong_out = random_channel_between(2, 2, 2, &mut trial_rng(0, 0)).unwrap();
        assert!(channel_cloning_residual(&wrong_out, &[PureState::basis(2, 0)]).is_err());
    }

    #[test]
    fn overlap_construction_hits_target() {
        let mut rng = trial_rng(31, 0);
        for &target in &[0.1, 0.5, 0.9] {
            let (a, b) = pair_with_overlap(3, target, &mut rng).unwrap();
            assert!((a.inner(&b).norm() - target).abs() < 1e-12);
        }
    }
}
