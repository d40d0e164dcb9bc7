//! Linear Kraus channels, the three hypothetical nonlinear state maps, and
//! their action on steered ensembles.
//!
//! A nonlinear map is applied to each component of a decomposition and the
//! results are re-mixed with the original weights. For a linear channel that
//! gives the same state for every decomposition of a given mixture; for a
//! nonlinear one it generally does not, and the difference is what a remote
//! observer could read out.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, tensor, trace_norm, ComplexMatrix, C64, MAX_DIM};
use crate::random::{random_isometry, trial_rng};
use crate::state::{
    mix, random_density, random_projective_povm, random_purification, steer, Decomposition,
    DensityMatrix, STATE_TOL,
};

/// `ρ ↦ Σ_k K_k ρ K_k^dag` with `Σ_k K_k^dag K_k = I`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelFile", into = "ChannelFile")]
pub struct KrausChannel {
    kraus_ops: Vec<ComplexMatrix>,
    dim_in: usize,
    dim_out: usize,
}

/// On-disk channel form: `{"dim_in": n, "dim_out": m, "kraus": [matrix, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<ComplexMatrix>,
}

impl TryFrom<ChannelFile> for KrausChannel {
    type Error = Error;

    fn try_from(f: ChannelFile) -> Result<Self> {
        let ch = KrausChannel::new(f.kraus)?;
        if ch.dim_in != f.dim_in || ch.dim_out != f.dim_out {
            return Err(Error::InvalidShape(format!(
                "declared {}->{} but Kraus operators map {}->{}",
                f.dim_in, f.dim_out, ch.dim_in, ch.dim_out
            )));
        }
        Ok(ch)
    }
}

impl From<KrausChannel> for ChannelFile {
    fn from(ch: KrausChannel) -> Self {
        ChannelFile {
            dim_in: ch.dim_in,
            dim_out: ch.dim_out,
            kraus: ch.kraus_ops,
        }
    }
}

impl KrausChannel {
    pub fn new(kraus_ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus_ops.first().ok_or_else(|| {
            Error::InvalidArgument("channel needs at least one Kraus operator".into())
        })?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        let mut sum = ComplexMatrix::zeros(dim_in, dim_in);
        for k in &kraus_ops {
            if k.rows() != dim_out || k.cols() != dim_in {
                return Err(Error::InvalidShape(format!(
                    "Kraus operator is {}x{}, expected {dim_out}x{dim_in}",
                    k.rows(),
                    k.cols()
                )));
            }
            sum = &sum + &(&k.adjoint() * k);
        }
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(dim_in));
        if residual > STATE_TOL {
            return Err(Error::IncompleteKraus { residual });
        }
        Ok(KrausChannel {
            kraus_ops,
            dim_in,
            dim_out,
        })
    }

    pub fn identity(dim: usize) -> Self {
        KrausChannel::new(vec![ComplexMatrix::identity(dim)]).expect("identity channel")
    }

    /// Single-qubit channel with Kraus set `{I, X, Y, Z} / 2`, sending every state to `I/2`.
    pub fn depolarizing_qubit() -> Self {
        let i = C64::new(0.0, 1.0);
        let o = C64::new(0.0, 0.0);
        let h = C64::new(0.5, 0.0);
        let ops = [
            [h, o, o, h],
            [o, h, h, o],
            [o, -i * 0.5, i * 0.5, o],
            [h, o, o, -h],
        ]
        .into_iter()
        .map(|d| ComplexMatrix::new(2, 2, d.to_vec()).expect("2x2"))
        .collect();
        KrausChannel::new(ops).expect("depolarizing channel")
    }

    /// The qubit reset pair `{|0><0|, |0><1|}`, sending every state to `|0><0|`.
    pub fn reset_to_zero() -> Self {
        let k1 = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).expect("2x2");
        let k2 = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).expect("2x2");
        KrausChannel::new(vec![k1, k2]).expect("reset channel")
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn completeness_residual(&self) -> f64 {
        let sum = self
            .kraus_ops
            .iter()
            .fold(ComplexMatrix::zeros(self.dim_in, self.dim_in), |acc, k| {
                &acc + &(&k.adjoint() * k)
            });
        sum.max_abs_diff(&ComplexMatrix::identity(self.dim_in))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply_channel(self, rho)
    }
}

pub fn apply_channel(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != ch.dim_in {
        return Err(Error::DimensionMismatch {
            context: "channel input",
            expected: ch.dim_in,
            found: rho.dim(),
        });
    }
    let out = ch
        .kraus_ops
        .iter()
        .map(|k| k.sandwich(rho.op()))
        .reduce(|acc, term| &acc + &term)
        .expect("non-empty Kraus set");
    DensityMatrix::new(out)
}

/// Random channel on `dim` from a Haar-random Stinespring isometry.
pub fn random_channel<R: Rng + ?Sized>(
    dim: usize,
    kraus_rank: usize,
    rng: &mut R,
) -> Result<KrausChannel> {
    random_channel_between(dim, dim, kraus_rank, rng)
}

/// Random channel `dim_in -> dim_out`: an isometry `V` from `dim_in` into
/// `dim_out * kraus_rank` whose `dim_out`-row blocks are the Kraus operators.
pub fn random_channel_between<R: Rng + ?Sized>(
    dim_in: usize,
    dim_out: usize,
    kraus_rank: usize,
    rng: &mut R,
) -> Result<KrausChannel> {
    if kraus_rank == 0 {
        return Err(Error::InvalidArgument(
            "Kraus rank must be at least 1".into(),
        ));
    }
    let rows = dim_out * kraus_rank;
    if rows < dim_in {
        return Err(Error::InvalidArgument(format!(
            "dim_out * kraus_rank = {rows} is smaller than dim_in = {dim_in}"
        )));
    }
    if rows > MAX_DIM || dim_in > MAX_DIM {
        return Err(Error::DimensionOverflow { rows, cols: dim_in });
    }
    let v = random_isometry(rows, dim_in, rng)?;
    let ops = (0..kraus_rank)
        .map(|k| {
            let mut op = ComplexMatrix::zeros(dim_out, dim_in);
            for i in 0..dim_out {
                for j in 0..dim_in {
                    op[(i, j)] = v[(k * dim_out + i, j)];
                }
            }
            op
        })
        .collect();
    KrausChannel::new(ops)
}

/// The hypothetical nonlinear state maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonlinearKind {
    /// Every input goes to `|0><0|`.
    CollapseToBasis0,
    /// `ρ ↦ ρ ⊗ ρ`, exact duplication.
    IdealCloner,
    /// `ρ ↦ |v><v|` for the dominant eigenvector `v`.
    PurifyDominant,
}

impl NonlinearKind {
    pub const ALL: [NonlinearKind; 3] = [
        NonlinearKind::CollapseToBasis0,
        NonlinearKind::IdealCloner,
        NonlinearKind::PurifyDominant,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            NonlinearKind::CollapseToBasis0 => "collapse_to_basis0",
            NonlinearKind::IdealCloner => "ideal_cloner",
            NonlinearKind::PurifyDominant => "purify_dominant",
        }
    }
}

impl fmt::Display for NonlinearKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NonlinearKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NonlinearKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown nonlinear map kind `{s}`")))
    }
}

/// A trace-preserving, generally nonlinear state map of a fixed kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NonlinearMap {
    kind: NonlinearKind,
    dim_in: usize,
    dim_out: usize,
}

impl NonlinearMap {
    pub fn new(kind: NonlinearKind, dim_in: usize) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&dim_in) {
            return Err(Error::InvalidArgument(format!(
                "dimension {dim_in} outside 2..=64"
            )));
        }
        let dim_out = match kind {
            NonlinearKind::IdealCloner => dim_in * dim_in,
            _ => dim_in,
        };
        if dim_out > MAX_DIM {
            return Err(Error::DimensionOverflow {
                rows: dim_out,
                cols: dim_out,
            });
        }
        Ok(NonlinearMap {
            kind,
            dim_in,
            dim_out,
        })
    }

    pub fn kind(&self) -> NonlinearKind {
        self.kind
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply_nonlinear(self, rho)
    }
}

pub fn apply_nonlinear(nm: &NonlinearMap, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != nm.dim_in {
        return Err(Error::DimensionMismatch {
            context: "nonlinear map input",
            expected: nm.dim_in,
            found: rho.dim(),
        });
    }
    match nm.kind {
        NonlinearKind::CollapseToBasis0 => Ok(DensityMatrix::basis(nm.dim_in, 0)),
        NonlinearKind::IdealCloner => DensityMatrix::new(tensor(rho.op(), rho.op())?),
        NonlinearKind::PurifyDominant => {
            let eig = eig_hermitian(rho.op())?;
            DensityMatrix::from_pure(&eig.vector(0))
        }
    }
}

/// Whatever Bob applies to his subsystem: a physical channel or a
/// hypothetical nonlinear map.
#[derive(Clone, Debug, PartialEq)]
pub enum LocalMap {
    Linear(KrausChannel),
    Nonlinear(NonlinearMap),
}

impl LocalMap {
    pub fn dim_in(&self) -> usize {
        match self {
            LocalMap::Linear(ch) => ch.dim_in(),
            LocalMap::Nonlinear(nm) => nm.dim_in(),
        }
    }

    pub fn dim_out(&self) -> usize {
        match self {
            LocalMap::Linear(ch) => ch.dim_out(),
            LocalMap::Nonlinear(nm) => nm.dim_out(),
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, LocalMap::Linear(_))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        match self {
            LocalMap::Linear(ch) => apply_channel(ch, rho),
            LocalMap::Nonlinear(nm) => apply_nonlinear(nm, rho),
        }
    }

    /// `Σ_j p_j Φ(ρ_j)`.
    pub fn evolve(&self, d: &Decomposition) -> Result<DensityMatrix> {
        if d.dim() != self.dim_in() {
            return Err(Error::DimensionMismatch {
                context: "decomposition component",
                expected: self.dim_in(),
                found: d.dim(),
            });
        }
        let evolved = d
            .components()
            .iter()
            .map(|rho| self.apply(rho))
            .collect::<Result<Vec<_>>>()?;
        mix(d
            .weights()
            .iter()
            .copied()
            .zip(evolved.iter().map(DensityMatrix::op)))
    }
}

impl From<KrausChannel> for LocalMap {
    fn from(ch: KrausChannel) -> Self {
        LocalMap::Linear(ch)
    }
}

impl From<NonlinearMap> for LocalMap {
    fn from(nm: NonlinearMap) -> Self {
        LocalMap::Nonlinear(nm)
    }
}

/// Applies `nm` to each component and re-mixes with the original weights.
pub fn evolve_decomposition(nm: &NonlinearMap, d: &Decomposition) -> Result<DensityMatrix> {
    LocalMap::Nonlinear(*nm).evolve(d)
}

/// `½ ‖ρ - σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            context: "trace distance",
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    Ok(0.5 * trace_norm(&(rho.op() - sigma.op()))?)
}

/// Largest disagreement found between evolved decompositions of the same state.
#[derive(Clone, Debug)]
pub struct LinearityReport {
    pub max_gap: f64,
    pub trial: u64,
    pub witness: (Decomposition, Decomposition),
    pub gaps: Vec<f64>,
}

/// Searches for two decompositions of one state that `map` sends to
/// different states.
///
/// Each trial draws a Ginibre `ρ_B`, purifies it with a random basis on A,
/// and steers it with two Haar-random projective measurements on A.
pub fn is_linear_consistent(
    map: &LocalMap,
    trials: usize,
    dim: usize,
    seed: u64,
) -> Result<LinearityReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if dim != map.dim_in() {
        return Err(Error::DimensionMismatch {
            context: "linearity probe",
            expected: map.dim_in(),
            found: dim,
        });
    }
    let results = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let rho_b = random_density(dim, &mut rng)?;
            let (shared, dims) = random_purification(&rho_b, &mut rng)?;
            let first = steer(&shared, &random_projective_povm(dim, &mut rng)?, dims)?;
            let second = steer(&shared, &random_projective_povm(dim, &mut rng)?, dims)?;
            let gap = trace_distance(&map.evolve(&first)?, &map.evolve(&second)?)?;
            Ok((gap, first, second))
        })
        .collect::<Result<Vec<_>>>()?;

    let gaps: Vec<f64> = results.iter().map(|r| r.0).collect();
    let (best, _) = gaps
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bg), (i, &g)| {
            if g > bg {
                (i, g)
            } else {
                (bi, bg)
            }
        });
    let (max_gap, first, second) = results.into_iter().nth(best).expect("trials >= 1");
    Ok(LinearityReport {
        max_gap,
        trial: best as u64,
        witness: (first, second),
        gaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::trial_rng;
    use crate::state::{DensityMatrix, PureState};

    fn general_qubit(a: f64, b: C64) -> DensityMatrix {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![C64::new(a, 0.0), b, b.conj(), C64::new(1.0 - a, 0.0)],
        )
        .unwrap();
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn reset_pair_sends_everything_to_zero() {
        let rho = general_qubit(0.3, C64::new(0.2, -0.1));
        let out = apply_channel(&KrausChannel::reset_to_zero(), &rho).unwrap();
        assert!(
            out.op()
                .max_abs_diff(&ComplexMatrix::from_diag(&[1.0, 0.0]))
                < 1e-15
        );
    }

    #[test]
    fn identity_channel_is_identity() {
        let rho = random_density(3, &mut trial_rng(1, 0)).unwrap();
        let out = apply_channel(&KrausChannel::identity(3), &rho).unwrap();
        assert!(out.op().max_abs_diff(rho.op()) < 1e-15);
    }

    #[test]
    fn depolarizing_gives_maximally_mixed() {
        let rho = general_qubit(0.8, C64::new(0.1, 0.3));
        let out = apply_channel(&KrausChannel::depolarizing_qubit(), &rho).unwrap();
        assert!(
            out.op()
                .max_abs_diff(&DensityMatrix::maximally_mixed(2).into_op())
                < 1e-15
        );
    }

    #[test]
    fn channel_rejects_wrong_dimension() {
        let rho = DensityMatrix::maximally_mixed(3);
        assert!(matches!(
            apply_channel(&KrausChannel::identity(2), &rho),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn incomplete_kraus_set_is_rejected() {
        let k = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            KrausChannel::new(vec![k]),
            Err(Error::IncompleteKraus { .. })
        ));
    }

    #[test]
    fn channel_file_round_trip() {
        let ch = KrausChannel::reset_to_zero();
        let json = serde_json::to_string(&ch).unwrap();
        assert!(json.contains("\"dim_in\":2"));
        let back: KrausChannel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ch);
        let lying = r#"{"dim_in": 3, "dim_out": 2, "kraus": [{"rows": 2, "cols": 2, "entries": [[1,0],[0,0],[0,0],[1,0]]}]}"#;
        assert!(serde_json::from_str::<KrausChannel>(lying).is_err());
    }

    #[test]
    fn random_channel_properties() {
        for rank in 1..=4 {
            let a = random_channel(3, rank, &mut trial_rng(5, rank as u64)).unwrap();
            let b = random_channel(3, rank, &mut trial_rng(5, rank as u64)).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.kraus_ops().len(), rank);
            assert!(a.completeness_residual() <= 1e-9);
        }
        let u = random_channel(2, 1, &mut trial_rng(6, 0)).unwrap();
        let k = &u.kraus_ops()[0];
        assert!((k * &k.adjoint()).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        assert!(random_channel(2, 0, &mut trial_rng(6, 0)).is_err());
    }

    #[test]
    fn collapse_maps_any_pure_state_to_zero() {
        let nm = NonlinearMap::new(NonlinearKind::CollapseToBasis0, 2).unwrap();
        let psi = PureState::new(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let out = apply_nonlinear(&nm, &psi.density()).unwrap();
        assert_eq!(out, DensityMatrix::basis(2, 0));
    }

    #[test]
    fn cloner_duplicates_plus() {
        let nm = NonlinearMap::new(NonlinearKind::IdealCloner, 2).unwrap();
        assert_eq!(nm.dim_out(), 4);
        let out = apply_nonlinear(&nm, &PureState::plus().density()).unwrap();
        let pp = ComplexMatrix::from_real(4, 4, &[0.25; 16]).unwrap();
        assert!(out.op().max_abs_diff(&pp) < 1e-15);
        assert!(NonlinearMap::new(NonlinearKind::IdealCloner, 9).is_err());
    }

    #[test]
    fn purify_dominant_picks_top_eigenvector() {
        let nm = NonlinearMap::new(NonlinearKind::PurifyDominant, 2).unwrap();
        let rho = DensityMatrix::new(ComplexMatrix::from_diag(&[0.9, 0.1])).unwrap();
        let out = apply_nonlinear(&nm, &rho).unwrap();
        assert!(
            out.op()
                .max_abs_diff(&ComplexMatrix::from_diag(&[1.0, 0.0]))
                < 1e-15
        );
    }

    #[test]
    fn purify_dominant_degenerate_input_is_deterministic() {
        let nm = NonlinearMap::new(NonlinearKind::PurifyDominant, 2).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        let a = apply_nonlinear(&nm, &rho).unwrap();
        let b = apply_nonlinear(&nm, &rho).unwrap();
        assert_eq!(a, b);
        assert!((a.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nonlinear_rejects_wrong_dimension() {
        let nm = NonlinearMap::new(NonlinearKind::IdealCloner, 2).unwrap();
        assert!(apply_nonlinear(&nm, &DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn cloner_on_z_and_x_ensembles() {
        let nm = NonlinearMap::new(NonlinearKind::IdealCloner, 2).unwrap();
        let z = Decomposition::new(
            vec![0.5, 0.5],
            vec![DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)],
        )
        .unwrap();
        let out = evolve_decomposition(&nm, &z).unwrap();
        assert!(
            out.op()
                .max_abs_diff(&ComplexMatrix::from_diag(&[0.5, 0.0, 0.0, 0.5]))
                < 1e-15
        );

        let x = Decomposition::new(
            vec![0.5, 0.5],
            vec![PureState::plus().density(), PureState::minus().density()],
        )
        .unwrap();
        let out = evolve_decomposition(&nm, &x).unwrap();
        // (|++><++| + |--><--|)/2 has 1/4 wherever the two sign patterns agree.
        let expected = ComplexMatrix::from_real(
            4,
            4,
            &[
                0.25, 0.0, 0.0, 0.25, //
                0.0, 0.25, 0.25, 0.0, //
                0.0, 0.25, 0.25, 0.0, //
                0.25, 0.0, 0.0, 0.25,
            ],
        )
        .unwrap();
        assert!(out.op().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn linear_evolution_ignores_decomposition() {
        let mut rng = trial_rng(12, 0);
        let ch = random_channel(2, 2, &mut rng).unwrap();
        let map = LocalMap::from(ch);
        let z = Decomposition::new(
            vec![0.5, 0.5],
            vec![DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)],
        )
        .unwrap();
        let x = Decomposition::new(
            vec![0.5, 0.5],
            vec![PureState::plus().density(), PureState::minus().density()],
        )
        .unwrap();
        let d = trace_distance(&map.evolve(&z).unwrap(), &map.evolve(&x).unwrap()).unwrap();
        assert!(d <= 1e-12);
    }

    #[test]
    fn linearity_probe_separates_linear_from_nonlinear() {
        let linear = LocalMap::from(random_channel(2, 3, &mut trial_rng(1, 1)).unwrap());
        assert!(is_linear_consistent(&linear, 20, 2, 99).unwrap().max_gap <= 1e-9);

        let collapse =
            LocalMap::from(NonlinearMap::new(NonlinearKind::CollapseToBasis0, 2).unwrap());
        assert!(is_linear_consistent(&collapse, 20, 2, 99).unwrap().max_gap <= 1e-9);

        let cloner = LocalMap::from(NonlinearMap::new(NonlinearKind::IdealCloner, 2).unwrap());
        let report = is_linear_consistent(&cloner, 10, 2, 99).unwrap();
        assert!(report.max_gap > 0.1, "max gap {}", report.max_gap);
        let (a, b) = &report.witness;
        assert!(
            a.mixture()
                .unwrap()
                .op()
                .max_abs_diff(b.mixture().unwrap().op())
                < 1e-9
        );
        assert_eq!(report.gaps.len(), 10);
    }

    #[test]
    fn linearity_probe_is_reproducible() {
        let map = LocalMap::from(NonlinearMap::new(NonlinearKind::PurifyDominant, 3).unwrap());
        let a = is_linear_consistent(&map, 8, 3, 5).unwrap();
        let b = is_linear_consistent(&map, 8, 3, 5).unwrap();
        assert_eq!(a.gaps, b.gaps);
        assert_eq!(a.trial, b.trial);
        assert!(is_linear_consistent(&map, 0, 3, 5).is_err());
        assert!(is_linear_consistent(&map, 1, 2, 5).is_err());
    }
}
