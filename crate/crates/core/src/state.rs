//! Density matrices, POVMs, decompositions, and bipartite measurement statistics.
//!
//! Alice's POVM elements act on subsystem A and are lifted to `A_j ⊗ I`
//! internally. Outcome probabilities are clamped to `[0, 1]` when they fall
//! inside `[-1e-9, 1 + 1e-9]`; anything further out is reported as an error.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eig_hermitian, inner, norm, partial_trace, tensor, BipartiteDims, ComplexMatrix, Side, C64,
    HERMITIAN_TOL, MAX_DIM, ZERO,
};
use crate::random::{ginibre, random_unitary};

/// Tolerance for trace, positivity, completeness, and weight checks.
pub const STATE_TOL: f64 = 1e-9;

/// Outcomes with probability below this are treated as impossible.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;

const POVM_RETRIES: usize = 5;

/// A Hermitian, positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    op: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(op: ComplexMatrix) -> Result<Self> {
        check_hermitian_psd(&op)?;
        let trace = op.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::NotUnitTrace { trace: trace.re });
        }
        Ok(DensityMatrix {
            op: op.hermitian_part(),
        })
    }

    pub fn from_pure(amplitudes: &[C64]) -> Result<Self> {
        DensityMatrix::new(ComplexMatrix::projector(amplitudes))
    }

    /// `|i><i|` in dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![ZERO; dim];
        v[i] = C64::new(1.0, 0.0);
        DensityMatrix {
            op: ComplexMatrix::projector(&v),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            op: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// `(|00..> + |11..> + ...)/√d` on a `d x d` system.
    pub fn phi_plus(dim: usize) -> Result<Self> {
        let dims = BipartiteDims::new(dim, dim)?;
        let mut v = vec![ZERO; dims.total()];
        let amp = C64::new((dim as f64).sqrt().recip(), 0.0);
        for i in 0..dim {
            v[i * dim + i] = amp;
        }
        DensityMatrix::from_pure(&v)
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        DensityMatrix::new(tensor(&a.op, &b.op)?)
    }

    pub fn op(&self) -> &ComplexMatrix {
        &self.op
    }

    pub fn into_op(self) -> ComplexMatrix {
        self.op
    }

    pub fn dim(&self) -> usize {
        self.op.rows()
    }

    pub fn purity(&self) -> f64 {
        self.op.trace_product(&self.op).re
    }

    /// Reduced state of subsystem B (`side = A`) or A (`side = B`).
    pub fn reduce(&self, dims: BipartiteDims, side: Side) -> Result<DensityMatrix> {
        DensityMatrix::new(partial_trace(&self.op, dims, side)?)
    }
}

fn check_hermitian_psd(op: &ComplexMatrix) -> Result<()> {
    if !op.is_square() {
        return Err(Error::InvalidShape(format!(
            "expected a square operator, got {}x{}",
            op.rows(),
            op.cols()
        )));
    }
    let asymmetry = op.hermitian_asymmetry();
    if asymmetry > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    let min_eigenvalue = eig_hermitian(op)?.min_value();
    if min_eigenvalue < -STATE_TOL {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    Ok(())
}

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PureStateLiteral", into = "PureStateLiteral")]
pub struct PureState {
    amplitudes: Vec<C64>,
}

/// On-disk pure state: `{"amplitudes": [[re, im], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PureStateLiteral {
    pub amplitudes: Vec<[f64; 2]>,
}

impl TryFrom<PureStateLiteral> for PureState {
    type Error = Error;

    fn try_from(lit: PureStateLiteral) -> Result<Self> {
        PureState::new(
            lit.amplitudes
                .iter()
                .map(|&[re, im]| C64::new(re, im))
                .collect(),
        )
    }
}

impl From<PureState> for PureStateLiteral {
    fn from(s: PureState) -> Self {
        PureStateLiteral {
            amplitudes: s.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() || amplitudes.len() > MAX_DIM {
            return Err(Error::InvalidShape(format!(
                "state vector of length {}",
                amplitudes.len()
            )));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let n = norm(&amplitudes);
        if (n - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(PureState { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        PureState::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = vec![ZERO; dim];
        v[i] = C64::new(1.0, 0.0);
        PureState { amplitudes: v }
    }

    /// `(|0> + |1>)/√2`.
    pub fn plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState {
            amplitudes: vec![C64::new(s, 0.0), C64::new(s, 0.0)],
        }
    }

    /// `(|0> - |1>)/√2`.
    pub fn minus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState {
            amplitudes: vec![C64::new(s, 0.0), C64::new(-s, 0.0)],
        }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn with_phase(&self, theta: f64) -> PureState {
        let p = C64::from_polar(1.0, theta);
        PureState {
            amplitudes: self.amplitudes.iter().map(|z| z * p).collect(),
        }
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.amplitudes)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            op: self.projector(),
        }
    }
}

/// A finite POVM: PSD elements summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidArgument("POVM needs at least one element".into()))?;
        let dim = first.rows();
        if labels.len() != elements.len() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} POVM elements",
                labels.len(),
                elements.len()
            )));
        }
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for e in &elements {
            if e.rows() != dim || e.cols() != dim {
                return Err(Error::DimensionMismatch {
                    context: "POVM element",
                    expected: dim,
                    found: e.rows().max(e.cols()),
                });
            }
            check_hermitian_psd(e)?;
            sum = &sum + e;
        }
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if residual > STATE_TOL {
            return Err(Error::IncompletePovm { residual });
        }
        Ok(Povm {
            elements: elements.iter().map(ComplexMatrix::hermitian_part).collect(),
            labels,
        })
    }

    /// POVM with outcome labels `"0"`, `"1"`, ...
    pub fn unlabeled(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let labels = (0..elements.len()).map(|i| i.to_string()).collect();
        Povm::new(elements, labels)
    }

    /// Rank-one projective measurement onto the columns of a unitary.
    pub fn from_basis(unitary: &ComplexMatrix) -> Result<Self> {
        let elements = (0..unitary.cols())
            .map(|k| ComplexMatrix::projector(&unitary.column(k)))
            .collect();
        Povm::unlabeled(elements)
    }

    /// Computational-basis measurement.
    pub fn z_basis(dim: usize) -> Self {
        Povm::from_basis(&ComplexMatrix::identity(dim)).expect("computational basis")
    }

    /// Fourier-basis measurement; for a qubit this is `{|+><+|, |-><-|}`.
    pub fn x_basis(dim: usize) -> Self {
        let mut f = ComplexMatrix::zeros(dim, dim);
        let scale = (dim as f64).sqrt().recip();
        for j in 0..dim {
            for k in 0..dim {
                let angle = 2.0 * std::f64::consts::PI * (j * k) as f64 / dim as f64;
                f[(j, k)] = C64::from_polar(scale, angle);
            }
        }
        let labels = if dim == 2 {
            vec!["+".to_string(), "-".to_string()]
        } else {
            (0..dim).map(|i| i.to_string()).collect()
        };
        let elements = (0..dim)
            .map(|k| ComplexMatrix::projector(&f.column(k)))
            .collect();
        Povm::new(elements, labels).expect("Fourier basis")
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }
}

/// A weighted ensemble `{(p_j, ρ_j)}` whose mixture is a density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    weights: Vec<f64>,
    components: Vec<DensityMatrix>,
}

impl Decomposition {
    pub fn new(weights: Vec<f64>, components: Vec<DensityMatrix>) -> Result<Self> {
        if weights.is_empty() || weights.len() != components.len() {
            return Err(Error::InvalidWeights(format!(
                "{} weights for {} components",
                weights.len(),
                components.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(Error::InvalidWeights(format!("weight {w} outside [0, 1]")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        let dim = components[0].dim();
        if let Some(c) = components.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch {
                context: "decomposition component",
                expected: dim,
                found: c.dim(),
            });
        }
        Ok(Decomposition {
            weights,
            components,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[DensityMatrix] {
        &self.components
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.weights.iter().copied().zip(&self.components)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    /// `Σ p_j ρ_j`.
    pub fn mixture(&self) -> Result<DensityMatrix> {
        mix(self.iter().map(|(p, rho)| (p, rho.op())))
    }
}

/// `Σ w_k M_k`, validated as a density matrix.
pub(crate) fn mix<'a>(
    terms: impl IntoIterator<Item = (f64, &'a ComplexMatrix)>,
) -> Result<DensityMatrix> {
    let mut acc: Option<ComplexMatrix> = None;
    for (w, m) in terms {
        let term = m.scale(w);
        acc = Some(match acc {
            Some(a) => &a + &term,
            None => term,
        });
    }
    DensityMatrix::new(acc.ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?)
}

/// Clamps a probability computed in floating point, rejecting values that
/// are too far outside `[0, 1]` to be rounding noise.
pub fn clamp_probability(value: f64) -> Result<f64> {
    if !(-STATE_TOL..=1.0 + STATE_TOL).contains(&value) {
        return Err(Error::ProbabilityOutOfRange { value });
    }
    Ok(value.clamp(0.0, 1.0))
}

fn check_bipartite(rho: &DensityMatrix, dims: BipartiteDims) -> Result<()> {
    if rho.dim() != dims.total() {
        return Err(Error::DimensionMismatch {
            context: "bipartite state",
            expected: dims.total(),
            found: rho.dim(),
        });
    }
    Ok(())
}

fn check_local(op: &ComplexMatrix, dim: usize, context: &'static str) -> Result<()> {
    if op.rows() != dim || op.cols() != dim {
        return Err(Error::DimensionMismatch {
            context,
            expected: dim,
            found: op.rows().max(op.cols()),
        });
    }
    Ok(())
}

/// `A_j ⊗ I_B`.
fn lift_alice(aj: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    tensor(aj, &ComplexMatrix::identity(dims.dim_b()))
}

/// `P_{jμ} = Tr(ρ (A_j ⊗ B_μ))`.
pub fn joint_probability(
    rho: &DensityMatrix,
    aj: &ComplexMatrix,
    bmu: &ComplexMatrix,
    dims: BipartiteDims,
) -> Result<f64> {
    check_bipartite(rho, dims)?;
    check_local(aj, dims.dim_a(), "Alice's POVM element")?;
    check_local(bmu, dims.dim_b(), "Bob's POVM element")?;
    let op = tensor(aj, bmu)?;
    clamp_probability(rho.op().trace_product(&op).re)
}

/// `Σ_j P_{jμ}`, Bob's outcome probability summed over Alice's results.
pub fn bob_marginal(
    rho: &DensityMatrix,
    alice_povm: &Povm,
    bmu: &ComplexMatrix,
    dims: BipartiteDims,
) -> Result<f64> {
    check_local_povm(alice_povm, dims)?;
    let mut total = 0.0;
    for aj in alice_povm.elements() {
        total += joint_probability(rho, aj, bmu, dims)?;
    }
    clamp_probability(total)
}

fn check_local_povm(povm: &Povm, dims: BipartiteDims) -> Result<()> {
    if povm.dim() != dims.dim_a() {
        return Err(Error::DimensionMismatch {
            context: "Alice's POVM",
            expected: dims.dim_a(),
            found: povm.dim(),
        });
    }
    Ok(())
}

/// Probability of Alice's outcome `A_j` and the state it leaves on Bob's side:
/// `p_j = Tr(ρ (A_j ⊗ I))`, `ρ_j = Tr_A(ρ (A_j ⊗ I)) / p_j`.
pub fn conditional_state(
    rho: &DensityMatrix,
    aj: &ComplexMatrix,
    dims: BipartiteDims,
) -> Result<(f64, DensityMatrix)> {
    check_bipartite(rho, dims)?;
    check_local(aj, dims.dim_a(), "Alice's POVM element")?;
    let weighted = rho.op() * &lift_alice(aj, dims)?;
    let unnormalized = partial_trace(&weighted, dims, Side::A)?;
    let p = clamp_probability(unnormalized.trace().re)?;
    if p < MIN_OUTCOME_PROBABILITY {
        return Err(Error::UnreachableOutcome { probability: p });
    }
    let rho_j = DensityMatrix::new(unnormalized.hermitian_part().scale(1.0 / p))?;
    Ok((p, rho_j))
}

/// The ensemble Alice's measurement prepares on Bob's side.
///
/// Outcomes with `p_j < 1e-12` are dropped.
pub fn steer(rho: &DensityMatrix, alice_povm: &Povm, dims: BipartiteDims) -> Result<Decomposition> {
    check_bipartite(rho, dims)?;
    check_local_povm(alice_povm, dims)?;
    let mut weights = Vec::with_capacity(alice_povm.len());
    let mut components = Vec::with_capacity(alice_povm.len());
    for aj in alice_povm.elements() {
        match conditional_state(rho, aj, dims) {
            Ok((p, rho_j)) => {
                weights.push(p);
                components.push(rho_j);
            }
            Err(Error::UnreachableOutcome { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Decomposition::new(weights, components)
}

/// Ginibre-ensemble mixed state `G G^dag / Tr(G G^dag)`.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<DensityMatrix> {
    if !(2..=MAX_DIM).contains(&dim) {
        return Err(Error::InvalidArgument(format!(
            "dimension {dim} outside 2..=64"
        )));
    }
    let g = ginibre(dim, dim, rng)?;
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scale(1.0 / tr))
}

/// Random `n_outcomes`-element POVM `S^{-1/2} Q_k S^{-1/2}` with `Q_k = G_k G_k^dag`.
pub fn random_povm<R: Rng + ?Sized>(dim: usize, n_outcomes: usize, rng: &mut R) -> Result<Povm> {
    if n_outcomes < 2 {
        return Err(Error::InvalidArgument(format!(
            "POVM needs at least 2 outcomes, got {n_outcomes}"
        )));
    }
    for _ in 0..POVM_RETRIES {
        let qs = (0..n_outcomes)
            .map(|_| ginibre(dim, dim, rng).map(|g| &g * &g.adjoint()))
            .collect::<Result<Vec<_>>>()?;
        let s = qs.iter().skip(1).fold(qs[0].clone(), |acc, q| &acc + q);
        let eig = eig_hermitian(&s)?;
        if eig.min_value() <= 1e-12 * eig.values[0] {
            continue;
        }
        let s_inv_sqrt = eig.reconstruct_with(|l| l.sqrt().recip());
        let elements = qs
            .iter()
            .map(|q| s_inv_sqrt.sandwich(q).hermitian_part())
            .collect();
        return Povm::unlabeled(elements);
    }
    Err(Error::SingularPovm {
        attempts: POVM_RETRIES,
    })
}

/// Projective measurement onto a Haar-random orthonormal basis.
pub fn random_projective_povm<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Povm> {
    Povm::from_basis(&random_unitary(dim, rng)?)
}

/// A random pure bipartite state on `dim x dim` whose B-marginal is `rho_b`:
/// `Σ_i √λ_i |a_i> ⊗ |e_i>` for the eigenpairs `(λ_i, e_i)` of `rho_b` and a
/// Haar-random basis `{a_i}` of A.
pub fn random_purification<R: Rng + ?Sized>(
    rho_b: &DensityMatrix,
    rng: &mut R,
) -> Result<(DensityMatrix, BipartiteDims)> {
    let dim = rho_b.dim();
    let dims = BipartiteDims::new(dim, dim)?;
    let eig = eig_hermitian(rho_b.op())?;
    let u = random_unitary(dim, rng)?;
    let mut psi = vec![ZERO; dims.total()];
    for (k, &lambda) in eig.values.iter().enumerate() {
        let w = lambda.max(0.0).sqrt();
        let a = u.column(k);
        let e = eig.vector(k);
        for (ia, za) in a.iter().enumerate() {
            for (ib, zb) in e.iter().enumerate() {
                psi[ia * dim + ib] += za * zb * w;
            }
        }
    }
    let n = norm(&psi);
    psi.iter_mut().for_each(|z| *z /= n);
    Ok((DensityMatrix::from_pure(&psi)?, dims))
}
