use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix shape {rows}x{cols} exceeds the {max}x{max} cap", max = crate::linalg::MAX_DIM)]
    DimensionOverflow { rows: usize, cols: usize },

    #[error("{context}: expected dimension {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (max |M - M^dag| = {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("trace is {trace}, expected 1")]
    NotUnitTrace { trace: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("POVM elements do not sum to identity (residual {residual:e})")]
    IncompletePovm { residual: f64 },

    #[error("Kraus operators violate sum K^dag K = I (residual {residual:e})")]
    IncompleteKraus { residual: f64 },

    #[error("invalid decomposition weights: {0}")]
    InvalidWeights(String),

    #[error("outcome is unreachable (probability {probability:e})")]
    UnreachableOutcome { probability: f64 },

    #[error("probability {value} outside the clamping window")]
    ProbabilityOutOfRange { value: f64 },

    #[error("random POVM draw stayed singular after {attempts} attempts")]
    SingularPovm { attempts: usize },

    #[error("state vector has norm {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}
