//! Scenario configs, built-in campaigns, and the reports they produce.
//!
//! A config file is a JSON object:
//!
//! ```json
//! {
//!   "name": "flash",
//!   "kind": "signaling",
//!   "seed": 7,
//!   "parameters": { "state": "phi_plus", "povm_1": "z_basis", "povm_2": "x_basis",
//!                   "map": "ideal_cloner", "copies": 20, "trials": 1000 }
//! }
//! ```
//!
//! `kind` is one of `signaling`, `no_signaling_cert`, `cloning`,
//! `contraction`, `linear_consistency`. `seed` is mandatory. Every key of
//! `parameters` is optional; see [`Parameters`] for names and defaults.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::channel::{
    is_linear_consistent, random_channel, random_channel_between, trace_distance, KrausChannel,
    LocalMap, NonlinearKind, NonlinearMap,
};
use crate::cloning::{
    basis_copier, channel_cloning_residual, cloning_consistency_witness, pair_with_overlap,
};
use crate::error::{Error, Result};
use crate::linalg::{BipartiteDims, ComplexMatrix, C64};
use crate::random::{random_pure_state, trial_rng, TrialRng};
use crate::report::to_canonical_string;
use crate::signaling::{no_signaling_certificate, run_scenario, SignalingScenario};
use crate::state::{random_density, random_povm, DensityMatrix, Povm, PureState};

/// RNG stream reserved for drawing a campaign's fixed ingredients, kept
/// apart from the per-trial streams `0..trials`.
const SETUP_STREAM: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Signaling,
    NoSignalingCert,
    Cloning,
    Contraction,
    LinearConsistency,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 5] = [
        ScenarioKind::Signaling,
        ScenarioKind::NoSignalingCert,
        ScenarioKind::Cloning,
        ScenarioKind::Contraction,
        ScenarioKind::LinearConsistency,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioKind::Signaling => "signaling",
            ScenarioKind::NoSignalingCert => "no_signaling_cert",
            ScenarioKind::Cloning => "cloning",
            ScenarioKind::Contraction => "contraction",
            ScenarioKind::LinearConsistency => "linear_consistency",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                let expected: Vec<_> = ScenarioKind::ALL.iter().map(|k| k.as_str()).collect();
                Error::config(
                    "kind",
                    format!(
                        "unknown kind `{s}`, expected one of {}",
                        expected.join(", ")
                    ),
                )
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSpec {
    PhiPlus,
    Product,
    Ginibre,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PovmSpec {
    ZBasis,
    XBasis,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapSpec {
    IdealCloner,
    CollapseToBasis0,
    PurifyDominant,
    Identity,
    Depolarizing,
    Reset,
    RandomChannel,
    /// The channel given inline under `parameters.channel`.
    Kraus,
}

impl MapSpec {
    fn nonlinear_kind(&self) -> Option<NonlinearKind> {
        match self {
            MapSpec::IdealCloner => Some(NonlinearKind::IdealCloner),
            MapSpec::CollapseToBasis0 => Some(NonlinearKind::CollapseToBasis0),
            MapSpec::PurifyDominant => Some(NonlinearKind::PurifyDominant),
            _ => None,
        }
    }
}

/// Campaign parameters. Kinds ignore the keys they do not use.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Parameters {
    pub state: StateSpec,
    pub dim_a: usize,
    pub dim_b: usize,
    pub povm_1: PovmSpec,
    pub povm_2: PovmSpec,
    /// Outcome count for `random` POVMs.
    pub outcomes: usize,
    pub map: MapSpec,
    pub kraus_rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel: Option<KrausChannel>,
    pub copies: usize,
    pub trials: usize,
    pub n_povm_pairs: usize,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_trace_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_success_rate: Option<f64>,
    /// For `linear_consistency`: whether a gap above `min_gap` is expected.
    /// Defaults to true for `ideal_cloner` and `purify_dominant`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect_signaling: Option<bool>,
    pub min_gap: f64,
    pub n_channels: usize,
    pub min_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_states: Option<Vec<PureState>>,
    pub max_dim: usize,
    pub max_kraus_rank: usize,
}

impl Default for Parameters {
    fn default() -> Self {
        Parameters {
            state: StateSpec::PhiPlus,
            dim_a: 2,
            dim_b: 2,
            povm_1: PovmSpec::ZBasis,
            povm_2: PovmSpec::XBasis,
            outcomes: 3,
            map: MapSpec::IdealCloner,
            kraus_rank: 2,
            channel: None,
            copies: 20,
            trials: 1000,
            n_povm_pairs: 100,
            tolerance: 1e-9,
            expected_trace_distance: None,
            min_success_rate: None,
            expect_signaling: None,
            min_gap: 0.1,
            n_channels: 100,
            min_residual: 0.05,
            test_states: None,
            max_dim: 4,
            max_kraus_rank: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub kind: ScenarioKind,
    pub parameters: Parameters,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Error::config("<document>", format!("invalid JSON: {e}")))?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::config("<document>", "expected a JSON object"))?;
        if let Some(extra) = obj
            .keys()
            .find(|k| !["name", "kind", "parameters", "seed"].contains(&k.as_str()))
        {
            return Err(Error::config(extra.clone(), "unknown field"));
        }
        let name = obj
            .get("name")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::config("name", "missing or not a string"))?
            .to_string();
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::config("kind", "missing or not a string"))?
            .parse()?;
        let seed = match obj.get("seed") {
            None => return Err(Error::config("seed", "seed is required")),
            Some(v) => v
                .as_u64()
                .ok_or_else(|| Error::config("seed", "expected an unsigned 64-bit integer"))?,
        };
        let parameters = match obj.get("parameters") {
            None => Parameters::default(),
            Some(p) => Parameters::deserialize(p)
                .map_err(|e| Error::config("parameters", e.to_string()))?,
        };
        Ok(ScenarioConfig {
            name,
            kind,
            parameters,
            seed,
        })
    }

    pub fn to_value(&self) -> Value {
        json!({
            "name": self.name,
            "kind": self.kind.as_str(),
            "seed": self.seed,
            "parameters": serde_json::to_value(&self.parameters).expect("serializable parameters"),
        })
    }
}

/// Names and one-line descriptions of the built-in scenarios, alphabetized.
pub const BUILTINS: [(&str, &str); 7] = [
    (
        "contraction",
        "random CPTP maps never increase the trace distance between two states",
    ),
    (
        "eq9-kraus",
        "the collapse-to-|0> state map equals the two-operator reset channel and cannot signal",
    ),
    (
        "flash",
        "|Phi+> with Z vs X on Alice's side and exact cloning on Bob's: trace distance 1/2",
    ),
    (
        "linear-consistency",
        "exact cloning maps two decompositions of one state to different states",
    ),
    (
        "no-cloning",
        "nonorthogonal pure states fail the cloning witness; random channels fail to clone",
    ),
    (
        "no-signaling",
        "a random linear channel on Bob's half of |Phi+> hides Alice's POVM choice",
    ),
    (
        "product-no-signal",
        "even exact cloning cannot signal through an unentangled product state",
    ),
];

pub fn list_scenarios() -> String {
    let width = BUILTINS.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    BUILTINS
        .iter()
        .map(|(name, desc)| format!("{name:<width$}  {desc}\n"))
        .collect()
}

pub fn builtin(name: &str, seed: u64) -> Result<ScenarioConfig> {
    let base = Parameters::default();
    let (kind, parameters) = match name {
        "contraction" => (
            ScenarioKind::Contraction,
            Parameters {
                trials: 500,
                ..base
            },
        ),
        "eq9-kraus" => (
            ScenarioKind::LinearConsistency,
            Parameters {
                map: MapSpec::CollapseToBasis0,
                trials: 1000,
                ..base
            },
        ),
        "flash" => (
            ScenarioKind::Signaling,
            Parameters {
                expected_trace_distance: Some(0.5),
                min_success_rate: Some(0.99),
                ..base
            },
        ),
        "linear-consistency" => (
            ScenarioKind::LinearConsistency,
            Parameters {
                trials: 100,
                ..base
            },
        ),
        "no-cloning" => (ScenarioKind::Cloning, base),
        "no-signaling" => (
            ScenarioKind::NoSignalingCert,
            Parameters {
                map: MapSpec::RandomChannel,
                n_povm_pairs: 1000,
                ..base
            },
        ),
        "product-no-signal" => (
            ScenarioKind::NoSignalingCert,
            Parameters {
                state: StateSpec::Product,
                n_povm_pairs: 200,
                ..base
            },
        ),
        other => {
            return Err(Error::config(
                "scenario",
                format!("unknown built-in scenario `{other}`"),
            ))
        }
    };
    Ok(ScenarioConfig {
        name: name.to_string(),
        kind,
        parameters,
        seed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    /// How `value` is compared to `threshold`: `<=`, `>=`, `>`, `==`, or `clonable`.
    pub comparison: &'static str,
}

impl Check {
    fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Check::new(name, value, threshold, "<=", value <= threshold)
    }

    fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Check::new(name, value, threshold, ">=", value >= threshold)
    }

    fn above(name: &str, value: f64, threshold: f64) -> Self {
        Check::new(name, value, threshold, ">", value > threshold)
    }

    fn new(name: &str, value: f64, threshold: f64, comparison: &'static str, passed: bool) -> Self {
        Check {
            name: name.to_string(),
            passed,
            value,
            threshold,
            comparison,
        }
    }

    fn to_value(&self) -> Value {
        json!({
            "name": self.name,
            "status": if self.passed { "pass" } else { "fail" },
            "value": self.value,
            "threshold": self.threshold,
            "comparison": self.comparison,
        })
    }
}

/// Outcome of one campaign.
#[derive(Clone, Debug)]
pub struct CampaignReport {
    pub config: ScenarioConfig,
    pub trace_distance: Option<f64>,
    pub success_rate: Option<f64>,
    pub copies: Option<usize>,
    pub trials: usize,
    pub max_gap: Option<f64>,
    pub checks: Vec<Check>,
    /// Data explaining the first failure, serialized only if a check fails.
    pub witness: Value,
    /// Name of the per-trial metric in `trial_values`.
    pub trial_metric: &'static str,
    pub trial_values: Vec<f64>,
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("scenario_name".into(), json!(self.config.name));
        obj.insert("kind".into(), json!(self.config.kind.as_str()));
        obj.insert("seed".into(), json!(self.config.seed));
        obj.insert("trace_distance".into(), json!(self.trace_distance));
        obj.insert("success_rate".into(), json!(self.success_rate));
        obj.insert("copies".into(), json!(self.copies));
        obj.insert("trials".into(), json!(self.trials));
        obj.insert("max_gap".into(), json!(self.max_gap));
        obj.insert(
            "checks".into(),
            Value::Array(self.checks.iter().map(Check::to_value).collect()),
        );
        obj.insert(
            "status".into(),
            json!(if self.passed() { "pass" } else { "fail" }),
        );
        obj.insert(
            "parameters".into(),
            serde_json::to_value(&self.config.parameters).expect("serializable parameters"),
        );
        if !self.passed() {
            obj.insert("witness".into(), self.witness.clone());
        }
        Value::Object(obj)
    }

    /// The canonical JSON report.
    pub fn to_json(&self) -> String {
        to_canonical_string(&self.to_value())
    }
}

pub fn run_config(config: &ScenarioConfig) -> Result<CampaignReport> {
    let p = &config.parameters;
    if p.trials == 0 {
        return Err(Error::config("parameters.trials", "must be at least 1"));
    }
    if p.tolerance.is_nan() || p.tolerance < 0.0 {
        return Err(Error::config(
            "parameters.tolerance",
            "must be non-negative",
        ));
    }
    match config.kind {
        ScenarioKind::Signaling => run_signaling(config),
        ScenarioKind::NoSignalingCert => run_certificate(config),
        ScenarioKind::Cloning => run_cloning(config),
        ScenarioKind::Contraction => run_contraction(config),
        ScenarioKind::LinearConsistency => run_linear_consistency(config),
    }
}

fn empty_report(config: &ScenarioConfig, trial_metric: &'static str) -> CampaignReport {
    CampaignReport {
        config: config.clone(),
        trace_distance: None,
        success_rate: None,
        copies: None,
        trials: config.parameters.trials,
        max_gap: None,
        checks: Vec::new(),
        witness: Value::Null,
        trial_metric,
        trial_values: Vec::new(),
    }
}

fn dims_of(p: &Parameters) -> Result<BipartiteDims> {
    BipartiteDims::new(p.dim_a, p.dim_b)
        .map_err(|e| Error::config("parameters.dim_a/dim_b", e.to_string()))
}

fn build_state(p: &Parameters, dims: BipartiteDims, rng: &mut TrialRng) -> Result<DensityMatrix> {
    match p.state {
        StateSpec::PhiPlus => {
            if dims.dim_a() != dims.dim_b() {
                return Err(Error::config(
                    "parameters.state",
                    "phi_plus needs dim_a == dim_b",
                ));
            }
            DensityMatrix::phi_plus(dims.dim_a())
        }
        StateSpec::Product => DensityMatrix::product(
            &random_density(dims.dim_a(), rng)?,
            &random_density(dims.dim_b(), rng)?,
        ),
        StateSpec::Ginibre => random_density(dims.total(), rng),
    }
}

fn build_povm(spec: PovmSpec, p: &Parameters, dim: usize, rng: &mut TrialRng) -> Result<Povm> {
    match spec {
        PovmSpec::ZBasis => Ok(Povm::z_basis(dim)),
        PovmSpec::XBasis => Ok(Povm::x_basis(dim)),
        PovmSpec::Random => random_povm(dim, p.outcomes, rng)
            .map_err(|e| Error::config("parameters.outcomes", e.to_string())),
    }
}

fn build_map(p: &Parameters, dim: usize, rng: &mut TrialRng) -> Result<LocalMap> {
    let qubit_only = |what: &str| {
        if dim == 2 {
            Ok(())
        } else {
            Err(Error::config(
                "parameters.map",
                format!("{what} acts on qubits only"),
            ))
        }
    };
    let map = match p.map {
        MapSpec::IdealCloner | MapSpec::CollapseToBasis0 | MapSpec::PurifyDominant => {
            let kind = p.map.nonlinear_kind().expect("nonlinear spec");
            NonlinearMap::new(kind, dim)
                .map_err(|e| Error::config("parameters.map", e.to_string()))?
                .into()
        }
        MapSpec::Identity => KrausChannel::identity(dim).into(),
        MapSpec::Depolarizing => {
            qubit_only("depolarizing")?;
            KrausChannel::depolarizing_qubit().into()
        }
        MapSpec::Reset => {
            qubit_only("reset")?;
            KrausChannel::reset_to_zero().into()
        }
        MapSpec::RandomChannel => random_channel(dim, p.kraus_rank, rng)
            .map_err(|e| Error::config("parameters.kraus_rank", e.to_string()))?
            .into(),
        MapSpec::Kraus => {
            let ch = p.channel.clone().ok_or_else(|| {
                Error::config("parameters.channel", "map `kraus` needs a channel")
            })?;
            if ch.dim_in() != dim {
                return Err(Error::config(
                    "parameters.channel",
                    format!(
                        "channel input dimension {} but subsystem has {dim}",
                        ch.dim_in()
                    ),
                ));
            }
            ch.into()
        }
    };
    Ok(map)
}

fn matrix_value(m: &ComplexMatrix) -> Value {
    serde_json::to_value(m).expect("serializable matrix")
}

fn run_signaling(config: &ScenarioConfig) -> Result<CampaignReport> {
    let p = &config.parameters;
    let dims = dims_of(p)?;
    let mut setup = trial_rng(config.seed, SETUP_STREAM);
    let state = build_state(p, dims, &mut setup)?;
    let povm_1 = build_povm(p.povm_1, p, dims.dim_a(), &mut setup)?;
    let povm_2 = build_povm(p.povm_2, p, dims.dim_a(), &mut setup)?;
    let map = build_map(p, dims.dim_b(), &mut setup)?;
    let linear = map.is_linear();
    let scenario = SignalingScenario::new(
        state,
        dims,
        povm_1,
        povm_2,
        map,
        p.copies,
        p.trials,
        config.seed,
    )
    .map_err(|e| Error::config("parameters", e.to_string()))?;
    let result = run_scenario(&scenario)?;

    let mut report = empty_report(config, "correct");
    report.trace_distance = Some(result.trace_distance);
    report.success_rate = Some(result.sampling_success_rate);
    report.copies = Some(result.copies_used);
    report.trial_values = result
        .trial_outcomes
        .iter()
        .map(|&ok| if ok { 1.0 } else { 0.0 })
        .collect();

    let d = result.trace_distance;
    let rate = result.sampling_success_rate;
    if let Some(expected) = p.expected_trace_distance {
        report.checks.push(Check::at_most(
            "trace_distance_error",
            (d - expected).abs(),
            p.tolerance,
        ));
    }
    if linear {
        report
            .checks
            .push(Check::at_most("linear_map_no_signaling", d, p.tolerance));
    }
    if let Some(min_rate) = p.min_success_rate {
        report
            .checks
            .push(Check::at_least("success_rate", rate, min_rate));
    }
    if p.copies == 1 {
        let helstrom = 0.5 * (1.0 + d);
        let sigma = (helstrom * (1.0 - helstrom) / p.trials as f64).sqrt();
        report.checks.push(Check::at_most(
            "helstrom_ceiling",
            rate,
            helstrom + 3.0 * sigma.max(0.5 / p.trials as f64),
        ));
    }
    report.witness = json!({
        "rho_prime": matrix_value(result.rho_prime.op()),
        "rho_dblprime": matrix_value(result.rho_dblprime.op()),
    });
    Ok(report)
}

fn run_certificate(config: &ScenarioConfig) -> Result<CampaignReport> {
    let p = &config.parameters;
    let dims = dims_of(p)?;
    let mut setup = trial_rng(config.seed, SETUP_STREAM);
    let state = build_state(p, dims, &mut setup)?;
    let map = build_map(p, dims.dim_b(), &mut setup)?;
    let cert =
        no_signaling_certificate(&state, dims, p.n_povm_pairs, &map, config.seed).map_err(|e| {
            match e {
                Error::InvalidArgument(msg) => Error::config("parameters.n_povm_pairs", msg),
                other => other,
            }
        })?;

    let mut report = empty_report(config, "gap");
    report.trials = p.n_povm_pairs;
    report.max_gap = Some(cert.max_gap);
    report.trial_values = cert.gaps.clone();
    report
        .checks
        .push(Check::at_most("max_gap", cert.max_gap, p.tolerance));
    let (a, b) = &cert.worst_povms;
    report.witness = json!({
        "pair_index": cert.worst_pair,
        "povm_1": a.elements().iter().map(matrix_value).collect::<Vec<_>>(),
        "povm_2": b.elements().iter().map(matrix_value).collect::<Vec<_>>(),
        "state": matrix_value(state.op()),
    });
    Ok(report)
}

/// `|0>, |1>, ...` plus the uniform superposition.
fn default_test_states(dim: usize) -> Vec<PureState> {
    let mut states: Vec<PureState> = (0..dim).map(|i| PureState::basis(dim, i)).collect();
    let amp = C64::new((dim as f64).sqrt().recip(), 0.0);
    states.push(PureState::new(vec![amp; dim]).expect("uniform superposition"));
    states
}

fn run_cloning(config: &ScenarioConfig) -> Result<CampaignReport> {
    let p = &config.parameters;
    let dim = p.dim_b;
    if !(2..=8).contains(&dim) {
        return Err(Error::config(
            "parameters.dim_b",
            "cloning needs 2 <= dim_b <= 8",
        ));
    }
    if p.max_kraus_rank == 0 {
        return Err(Error::config(
            "parameters.max_kraus_rank",
            "must be at least 1",
        ));
    }

    // Random nonorthogonal pairs must all fail the witness.
    let verdicts = (0..p.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(config.seed, t);
            let overlap = rng.random_range(0.1..=0.9);
            let (a, b) = pair_with_overlap(dim, overlap, &mut rng)?;
            cloning_consistency_witness(&a, &b)
        })
        .collect::<Result<Vec<_>>>()?;
    let wrongly_clonable = verdicts.iter().filter(|v| v.clonable).count();

    let mut setup = trial_rng(config.seed, SETUP_STREAM);
    let psi = random_pure_state(dim, &mut setup);
    let (orth_a, orth_b) = pair_with_overlap(dim, 0.0, &mut setup)?;
    let same = cloning_consistency_witness(&psi, &psi.with_phase(1.0))?;
    let orth = cloning_consistency_witness(&orth_a, &orth_b)?;

    let test_states = p
        .test_states
        .clone()
        .unwrap_or_else(|| default_test_states(dim));
    if test_states.iter().any(|s| s.dim() != dim) {
        return Err(Error::config(
            "parameters.test_states",
            "dimension differs from dim_b",
        ));
    }
    let channel_stream = p.trials as u64;
    let residuals = (0..p.n_channels as u64)
        .into_par_iter()
        .map(|c| {
            let mut rng = trial_rng(config.seed, channel_stream + c);
            let rank = rng.random_range(1..=p.max_kraus_rank);
            let ch = random_channel_between(dim, dim * dim, rank, &mut rng)?;
            channel_cloning_residual(&ch, &test_states)
        })
        .collect::<Result<Vec<_>>>()?;
    let min_residual = residuals.iter().copied().fold(f64::INFINITY, f64::min);
    let basis: Vec<PureState> = (0..dim).map(|i| PureState::basis(dim, i)).collect();
    let copier_residual = channel_cloning_residual(&basis_copier(dim)?, &basis)?;

    let mut report = empty_report(config, "overlap");
    report.trial_values = verdicts.iter().map(|v| v.overlap).collect();
    report.checks.push(Check::new(
        "nonorthogonal_pairs_clonable",
        wrongly_clonable as f64,
        0.0,
        "==",
        wrongly_clonable == 0,
    ));
    report.checks.push(Check::new(
        "identical_pair_clonable",
        same.overlap,
        1.0,
        "clonable",
        same.clonable,
    ));
    report.checks.push(Check::new(
        "orthogonal_pair_clonable",
        orth.overlap,
        0.0,
        "clonable",
        orth.clonable,
    ));
    if !residuals.is_empty() {
        report.checks.push(Check::above(
            "random_channel_min_residual",
            min_residual,
            p.min_residual,
        ));
    }
    report.checks.push(Check::at_most(
        "basis_copier_residual",
        copier_residual,
        p.tolerance,
    ));
    report.witness = json!({
        "clonable_trials": verdicts
            .iter()
            .enumerate()
            .filter(|(_, v)| v.clonable)
            .map(|(i, _)| i)
            .collect::<Vec<_>>(),
        "residuals": residuals,
    });
    Ok(report)
}

fn run_contraction(config: &ScenarioConfig) -> Result<CampaignReport> {
    let p = &config.parameters;
    if !(2..=8).contains(&p.max_dim) {
        return Err(Error::config(
            "parameters.max_dim",
            "must be between 2 and 8",
        ));
    }
    if p.max_kraus_rank == 0 {
        return Err(Error::config(
            "parameters.max_kraus_rank",
            "must be at least 1",
        ));
    }
    let rows = (0..p.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(config.seed, t);
            let dim = rng.random_range(2..=p.max_dim);
            let rank = rng.random_range(1..=p.max_kraus_rank);
            let rho = random_density(dim, &mut rng)?;
            let sigma = random_density(dim, &mut rng)?;
            let ch = random_channel(dim, rank, &mut rng)?;
            let before = trace_distance(&rho, &sigma)?;
            let after = trace_distance(&ch.apply(&rho)?, &ch.apply(&sigma)?)?;
            Ok((dim, rank, before, after))
        })
        .collect::<Result<Vec<_>>>()?;
    let excess: Vec<f64> = rows.iter().map(|&(_, _, b, a)| a - b).collect();
    let worst = excess
        .iter()
        .enumerate()
        .fold(0, |best, (i, &e)| if e > excess[best] { i } else { best });
    let (dim, rank, before, after) = rows[worst];

    let mut report = empty_report(config, "excess");
    report.max_gap = Some(excess[worst]);
    report.checks.push(Check::at_most(
        "max_distance_increase",
        excess[worst],
        p.tolerance,
    ));
    report.trial_values = excess;
    report.witness = json!({
        "trial": worst,
        "dim": dim,
        "kraus_rank": rank,
        "distance_before": before,
        "distance_after": after,
    });
    Ok(report)
}

fn run_linear_consistency(config: &ScenarioConfig) -> Result<CampaignReport> {
    let p = &config.parameters;
    let dim = p.dim_b;
    let mut setup = trial_rng(config.seed, SETUP_STREAM);
    let map = build_map(p, dim, &mut setup)?;
    let linearity = is_linear_consistent(&map, p.trials, dim, config.seed)?;
    let expect_signaling = p.expect_signaling.unwrap_or(matches!(
        p.map,
        MapSpec::IdealCloner | MapSpec::PurifyDominant
    ));

    let mut report = empty_report(config, "gap");
    report.max_gap = Some(linearity.max_gap);
    report.trial_values = linearity.gaps.clone();
    if expect_signaling {
        report
            .checks
            .push(Check::above("max_gap", linearity.max_gap, p.min_gap));
    } else {
        report
            .checks
            .push(Check::at_most("max_gap", linearity.max_gap, p.tolerance));
    }

    let mut witness = Map::new();
    witness.insert("trial".into(), json!(linearity.trial));
    let (a, b) = &linearity.witness;
    for (key, d) in [("decomposition_1", a), ("decomposition_2", b)] {
        witness.insert(
            key.into(),
            json!({
                "weights": d.weights(),
                "components": d.components().iter().map(|c| matrix_value(c.op())).collect::<Vec<_>>(),
            }),
        );
    }

    if p.map == MapSpec::CollapseToBasis0 && dim == 2 {
        let reset = KrausChannel::reset_to_zero();
        let collapse = NonlinearMap::new(NonlinearKind::CollapseToBasis0, 2)?;
        let agreement_stream = p.trials as u64;
        let diffs = (0..p.trials as u64)
            .into_par_iter()
            .map(|t| {
                let rho = random_density(2, &mut trial_rng(config.seed, agreement_stream + t))?;
                let by_map = collapse.apply(&rho)?;
                let by_kraus = reset.apply(&rho)?;
                Ok(by_map.op().max_abs_diff(by_kraus.op()))
            })
            .collect::<Result<Vec<_>>>()?;
        let worst = diffs.iter().copied().fold(0.0, f64::max);
        report
            .checks
            .push(Check::at_most("kraus_equivalence", worst, p.tolerance));
        witness.insert("kraus_equivalence_max_diff".into(), json!(worst));
    }
    report.witness = Value::Object(witness);
    Ok(report)
}
