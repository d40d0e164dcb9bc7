//! Numerical laboratory for steering, no-signaling, and no-cloning.
//!
//! Alice and Bob share a bipartite state. Alice's choice of measurement
//! picks which ensemble describes Bob's half, but never changes Bob's
//! reduced density matrix. Under any linear channel Bob's ensembles stay
//! indistinguishable; under a nonlinear map such as exact cloning they
//! separate, and Bob could learn Alice's choice from enough copies.

pub mod channel;
pub mod cloning;
pub mod error;
pub mod linalg;
pub mod random;
pub mod report;
pub mod scenario;
pub mod signaling;
pub mod state;

pub use channel::{
    apply_channel, apply_nonlinear, evolve_decomposition, is_linear_consistent, random_channel,
    random_channel_between, trace_distance, KrausChannel, LinearityReport, LocalMap, NonlinearKind,
    NonlinearMap,
};
pub use cloning::{channel_cloning_residual, cloning_consistency_witness, CloningVerdict};
pub use error::{Error, Result};
pub use linalg::{
    eig_hermitian, partial_trace, tensor, trace_norm, BipartiteDims, ComplexMatrix, HermitianEigen,
    Side, C64,
};
pub use scenario::{
    builtin, list_scenarios, run_config, CampaignReport, ScenarioConfig, ScenarioKind,
};
pub use signaling::{
    distinguish_by_sampling, no_signaling_certificate, run_scenario, SignalingReport,
    SignalingScenario,
};
pub use state::{
    bob_marginal, conditional_state, joint_probability, random_density, random_povm, steer,
    Decomposition, DensityMatrix, Povm, PureState,
};
