//! Alice chooses between two measurements on a shared state; Bob evolves
//! his half and tries to tell which one she made.
//!
//! Bob's evolved states are compared exactly by trace distance and
//! operationally by a sampling distinguisher: each copy is measured with the
//! Helstrom projectors of the pair, and the hypothesis with the larger
//! likelihood given the outcome counts wins, ties going to hypothesis 1.

use rand::Rng;
use rayon::prelude::*;

use crate::channel::{trace_distance, KrausChannel, LocalMap, NonlinearKind, NonlinearMap};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, BipartiteDims, ComplexMatrix};
use crate::random::trial_rng;
use crate::state::{clamp_probability, random_povm, steer, DensityMatrix, Povm};

/// Eigenvalues of `ρ₁ - ρ₂` above `-1e-12` count as non-negative.
pub const HELSTROM_ZERO_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct SignalingScenario {
    pub shared_state: DensityMatrix,
    pub dims: BipartiteDims,
    pub povm_1: Povm,
    pub povm_2: Povm,
    pub map: LocalMap,
    pub copies: usize,
    pub trials: usize,
    pub seed: u64,
}

impl SignalingScenario {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        shared_state: DensityMatrix,
        dims: BipartiteDims,
        povm_1: Povm,
        povm_2: Povm,
        map: LocalMap,
        copies: usize,
        trials: usize,
        seed: u64,
    ) -> Result<Self> {
        let s = SignalingScenario {
            shared_state,
            dims,
            povm_1,
            povm_2,
            map,
            copies,
            trials,
            seed,
        };
        s.validate()?;
        Ok(s)
    }

    /// `|Φ⁺>` on two qubits, Z versus X on Alice's side, and exact cloning on Bob's.
    pub fn flash(copies: usize, trials: usize, seed: u64) -> Result<Self> {
        SignalingScenario::new(
            DensityMatrix::phi_plus(2)?,
            BipartiteDims::qubits(),
            Povm::z_basis(2),
            Povm::x_basis(2),
            NonlinearMap::new(NonlinearKind::IdealCloner, 2)?.into(),
            copies,
            trials,
            seed,
        )
    }

    fn validate(&self) -> Result<()> {
        if self.shared_state.dim() != self.dims.total() {
            return Err(Error::DimensionMismatch {
                context: "shared state",
                expected: self.dims.total(),
                found: self.shared_state.dim(),
            });
        }
        for povm in [&self.povm_1, &self.povm_2] {
            if povm.dim() != self.dims.dim_a() {
                return Err(Error::DimensionMismatch {
                    context: "Alice's POVM",
                    expected: self.dims.dim_a(),
                    found: povm.dim(),
                });
            }
        }
        if self.map.dim_in() != self.dims.dim_b() {
            return Err(Error::DimensionMismatch {
                context: "Bob's map",
                expected: self.dims.dim_b(),
                found: self.map.dim_in(),
            });
        }
        if self.copies == 0 || self.trials == 0 {
            return Err(Error::InvalidArgument(
                "copies and trials must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SignalingReport {
    pub rho_prime: DensityMatrix,
    pub rho_dblprime: DensityMatrix,
    pub trace_distance: f64,
    pub sampling_success_rate: f64,
    pub copies_used: usize,
    pub trials: usize,
    /// Whether each sampling trial guessed correctly, by trial index.
    pub trial_outcomes: Vec<bool>,
}

pub fn run_scenario(s: &SignalingScenario) -> Result<SignalingReport> {
    s.validate()?;
    let rho_prime = s.map.evolve(&steer(&s.shared_state, &s.povm_1, s.dims)?)?;
    let rho_dblprime = s.map.evolve(&steer(&s.shared_state, &s.povm_2, s.dims)?)?;
    let distance = trace_distance(&rho_prime, &rho_dblprime)?.min(1.0);
    let distinguisher = HelstromDistinguisher::new(&rho_prime, &rho_dblprime)?;
    let trial_outcomes = distinguisher.run(s.copies, s.trials, s.seed);
    Ok(SignalingReport {
        sampling_success_rate: success_rate(&trial_outcomes),
        rho_prime,
        rho_dblprime,
        trace_distance: distance,
        copies_used: s.copies,
        trials: s.trials,
        trial_outcomes,
    })
}

fn success_rate(outcomes: &[bool]) -> f64 {
    outcomes.iter().filter(|&&ok| ok).count() as f64 / outcomes.len() as f64
}

/// The Helstrom measurement for a pair of states, reduced to the probability
/// that each hypothesis yields the "positive" outcome.
#[derive(Clone, Debug)]
pub struct HelstromDistinguisher {
    positive_projector: ComplexMatrix,
    p_plus: [f64; 2],
}

impl HelstromDistinguisher {
    pub fn new(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<Self> {
        if rho1.dim() != rho2.dim() {
            return Err(Error::DimensionMismatch {
                context: "distinguisher",
                expected: rho1.dim(),
                found: rho2.dim(),
            });
        }
        let eig = eig_hermitian(&(rho1.op() - rho2.op()))?;
        let positive_projector = eig.spectral_projector(|l| l > -HELSTROM_ZERO_TOL);
        let p_plus = [
            clamp_probability(rho1.op().trace_product(&positive_projector).re)?,
            clamp_probability(rho2.op().trace_product(&positive_projector).re)?,
        ];
        Ok(HelstromDistinguisher {
            positive_projector,
            p_plus,
        })
    }

    pub fn positive_projector(&self) -> &ComplexMatrix {
        &self.positive_projector
    }

    /// Probability of the positive outcome under hypothesis 1 and 2.
    pub fn outcome_probabilities(&self) -> [f64; 2] {
        self.p_plus
    }

    /// Returns hypothesis 1 or 2 given `plus` positive outcomes out of `copies`.
    pub fn decide(&self, plus: usize, copies: usize) -> u8 {
        let ll = |q: f64| log_likelihood(q, plus, copies - plus);
        if ll(self.p_plus[0]) >= ll(self.p_plus[1]) {
            1
        } else {
            2
        }
    }

    /// One trial: draw the truth, measure `copies` copies, guess.
    pub fn run_trial<R: Rng + ?Sized>(&self, copies: usize, rng: &mut R) -> bool {
        let truth: u8 = if rng.random_bool(0.5) { 1 } else { 2 };
        let q = self.p_plus[usize::from(truth - 1)];
        let plus = (0..copies).filter(|_| rng.random_bool(q)).count();
        self.decide(plus, copies) == truth
    }

    /// Per-trial correctness, ordered by trial index.
    pub fn run(&self, copies: usize, trials: usize, seed: u64) -> Vec<bool> {
        (0..trials as u64)
            .into_par_iter()
            .map(|t| self.run_trial(copies, &mut trial_rng(seed, t)))
            .collect()
    }
}

/// `k ln q + m ln(1 - q)` with `0 ln 0 = 0`.
fn log_likelihood(q: f64, k: usize, m: usize) -> f64 {
    let term = |n: usize, p: f64| if n == 0 { 0.0 } else { n as f64 * p.ln() };
    term(k, q) + term(m, 1.0 - q)
}

/// Fraction of `trials` in which Bob, holding `copies` i.i.d. copies of the
/// unknown state, names it correctly.
pub fn distinguish_by_sampling(
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    copies: usize,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if copies == 0 || trials == 0 {
        return Err(Error::InvalidArgument(
            "copies and trials must be at least 1".into(),
        ));
    }
    let d = HelstromDistinguisher::new(rho1, rho2)?;
    Ok(success_rate(&d.run(copies, trials, seed)))
}

/// Single-copy optimum `½(1 + D)`.
pub fn helstrom_success(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    Ok(0.5 * (1.0 + trace_distance(rho1, rho2)?))
}

#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub max_gap: f64,
    /// Index of the POVM pair achieving `max_gap`.
    pub worst_pair: u64,
    pub gaps: Vec<f64>,
    pub worst_povms: (Povm, Povm),
}

/// Largest trace distance between Bob's evolved ensembles over
/// `n_povm_pairs` random pairs of Alice's POVMs (2 to 4 outcomes each).
pub fn no_signaling_certificate(
    state: &DensityMatrix,
    dims: BipartiteDims,
    n_povm_pairs: usize,
    map: &LocalMap,
    seed: u64,
) -> Result<CertificateReport> {
    if n_povm_pairs == 0 {
        return Err(Error::InvalidArgument("need at least one POVM pair".into()));
    }
    if state.dim() != dims.total() {
        return Err(Error::DimensionMismatch {
            context: "shared state",
            expected: dims.total(),
            found: state.dim(),
        });
    }
    if map.dim_in() != dims.dim_b() {
        return Err(Error::DimensionMismatch {
            context: "Bob's map",
            expected: dims.dim_b(),
            found: map.dim_in(),
        });
    }
    let results = (0..n_povm_pairs as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let n1 = rng.random_range(2..=4);
            let n2 = rng.random_range(2..=4);
            let p1 = random_povm(dims.dim_a(), n1, &mut rng)?;
            let p2 = random_povm(dims.dim_a(), n2, &mut rng)?;
            let gap = trace_distance(
                &map.evolve(&steer(state, &p1, dims)?)?,
                &map.evolve(&steer(state, &p2, dims)?)?,
            )?;
            Ok((gap, p1, p2))
        })
        .collect::<Result<Vec<_>>>()?;
    let gaps: Vec<f64> = results.iter().map(|r| r.0).collect();
    let worst = gaps
        .iter()
        .enumerate()
        .fold(0, |best, (i, &g)| if g > gaps[best] { i } else { best });
    let (max_gap, p1, p2) = results.into_iter().nth(worst).expect("non-empty");
    Ok(CertificateReport {
        max_gap,
        worst_pair: worst as u64,
        gaps,
        worst_povms: (p1, p2),
    })
}

/// [`no_signaling_certificate`] for a physical channel.
pub fn certify_channel(
    state: &DensityMatrix,
    dims: BipartiteDims,
    n_povm_pairs: usize,
    channel: &KrausChannel,
    seed: u64,
) -> Result<f64> {
    no_signaling_certificate(
        state,
        dims,
        n_povm_pairs,
        &LocalMap::Linear(channel.clone()),
        seed,
    )
    .map(|r| r.max_gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::random_channel;
    use crate::state::{random_density, PureState};

    #[test]
    fn flash_trace_distance_is_half() {
        let report = run_scenario(&SignalingScenario::flash(1, 10, 0).unwrap()).unwrap();
        assert!((report.trace_distance - 0.5).abs() <= 1e-9);
    }

    #[test]
    fn flash_with_linear_channel_does_not_signal() {
        let mut s = SignalingScenario::flash(1, 10, 0).unwrap();
        s.map = random_channel(2, 3, &mut trial_rng(4, 0)).unwrap().into();
        assert!(run_scenario(&s).unwrap().trace_distance <= 1e-9);
    }

    #[test]
    fn identical_povms_do_not_signal() {
        let mut s = SignalingScenario::flash(1, 10, 0).unwrap();
        s.povm_2 = s.povm_1.clone();
        assert!(run_scenario(&s).unwrap().trace_distance <= 1e-9);
    }

    #[test]
    fn scenario_validation() {
        let s = SignalingScenario::new(
            DensityMatrix::phi_plus(2).unwrap(),
            BipartiteDims::qubits(),
            Povm::z_basis(3),
            Povm::x_basis(2),
            KrausChannel::identity(2).into(),
            1,
            1,
            0,
        );
        assert!(matches!(s, Err(Error::DimensionMismatch { .. })));
        assert!(SignalingScenario::flash(0, 1, 0).is_err());
    }

    #[test]
    fn flash_helstrom_outcome_probabilities() {
        // ρ₁ - ρ₂ has eigenvalues {1/2, 0, 0, -1/2}; the negative eigenvector
        // (|01> + |10>)/√2 is orthogonal to ρ₁'s support and carries half of ρ₂.
        let r = run_scenario(&SignalingScenario::flash(1, 1, 0).unwrap()).unwrap();
        let d = HelstromDistinguisher::new(&r.rho_prime, &r.rho_dblprime).unwrap();
        let [q1, q2] = d.outcome_probabilities();
        assert!((q1 - 1.0).abs() < 1e-12);
        assert!((q2 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn identical_states_give_coin_flip() {
        let rho = random_density(3, &mut trial_rng(2, 0)).unwrap();
        let trials = 4000;
        let rate = distinguish_by_sampling(&rho, &rho, 5, trials, 17).unwrap();
        let sigma = (0.25 / trials as f64).sqrt();
        assert!((rate - 0.5).abs() <= 3.0 * sigma, "rate {rate}");
    }

    #[test]
    fn orthogonal_states_are_always_identified() {
        let a = PureState::basis(2, 0).density();
        let b = PureState::basis(2, 1).density();
        assert_eq!(distinguish_by_sampling(&a, &b, 1, 500, 3).unwrap(), 1.0);
    }

    #[test]
    fn decision_rule_ties_go_to_first_hypothesis() {
        let rho = DensityMatrix::maximally_mixed(2);
        let d = HelstromDistinguisher::new(&rho, &rho).unwrap();
        assert_eq!(d.decide(0, 3), 1);
        assert_eq!(d.decide(3, 3), 1);
    }

    #[test]
    fn sampling_is_reproducible() {
        let r = run_scenario(&SignalingScenario::flash(1, 10, 0).unwrap()).unwrap();
        let a = distinguish_by_sampling(&r.rho_prime, &r.rho_dblprime, 3, 300, 8).unwrap();
        let b = distinguish_by_sampling(&r.rho_prime, &r.rho_dblprime, 3, 300, 8).unwrap();
        assert_eq!(a, b);
        assert!(distinguish_by_sampling(&r.rho_prime, &r.rho_dblprime, 0, 300, 8).is_err());
    }

    #[test]
    fn maximally_entangled_identity_channel_certificate() {
        let gap = certify_channel(
            &DensityMatrix::phi_plus(2).unwrap(),
            BipartiteDims::qubits(),
            50,
            &KrausChannel::identity(2),
            1,
        )
        .unwrap();
        assert!(gap <= 1e-9);
    }

    #[test]
    fn product_state_with_cloner_certificate() {
        let mut rng = trial_rng(10, 0);
        let rho = DensityMatrix::product(
            &random_density(2, &mut rng).unwrap(),
            &random_density(2, &mut rng).unwrap(),
        )
        .unwrap();
        let cloner = NonlinearMap::new(NonlinearKind::IdealCloner, 2)
            .unwrap()
            .into();
        let report =
            no_signaling_certificate(&rho, BipartiteDims::qubits(), 30, &cloner, 2).unwrap();
        assert!(report.max_gap <= 1e-9);
        assert_eq!(report.gaps.len(), 30);
    }

    #[test]
    fn entangled_state_with_cloner_is_not_certified() {
        let cloner = NonlinearMap::new(NonlinearKind::IdealCloner, 2)
            .unwrap()
            .into();
        let report = no_signaling_certificate(
            &DensityMatrix::phi_plus(2).unwrap(),
            BipartiteDims::qubits(),
            30,
            &cloner,
            2,
        )
        .unwrap();
        assert!(report.max_gap > 1e-3);
    }
}
