use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("composite of consecutive differentials is nonzero: {0}")]
    CompositionNonzero(String),

    #[error("invariant violation at {location}: {message}")]
    InvariantViolation { location: String, message: String },

    #[error("degree {degree} is at or beyond the truncation boundary (N = {trunc})")]
    TruncationBoundary { degree: usize, trunc: usize },

    #[error("truncation mismatch: horizontal {horizontal}, vertical {vertical}")]
    TruncationMismatch { horizontal: usize, vertical: usize },

    #[error("action is not functorial: {0}")]
    NotFunctorial(String),

    #[error("simplicial identity fails: {0}")]
    SimplicialIdentityFailure(String),

    #[error("induced map leaves the chosen cohomology complement: {0}")]
    RepresentativeDrift(String),

    #[error("coefficient differential is not G-equivariant: {0}")]
    NonEquivariantCoefficients(String),

    #[error("subspace not closed under operators: {0}")]
    NotClosedUnderOperators(String),

    #[error("group order {order} is not invertible in characteristic {characteristic}")]
    NonInvertibleOrder { order: usize, characteristic: u64 },

    #[error("input is not equivariant: {0}")]
    NonEquivariantInput(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("action is not free: {0}")]
    NotFree(String),
}

impl Error {
    pub fn invariant(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvariantViolation {
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
