use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a documented invariant (shape, finiteness, ranges).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A file or string could not be parsed into the expected format.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// The biorthogonal rescaling of a left/right eigenvector pair is impossible
    /// because their conjugate inner product vanishes.
    #[error("degenerate normalization: {0}")]
    DegenerateNormalization(String),

    /// Division by a vanishing quantity (for instance `nu = -eps` or `beta = 0`).
    #[error("singular input: {0}")]
    SingularInput(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("no root in bracket: {0}")]
    RootNotBracketed(String),

    #[error("non-transversal crossing: {0}")]
    NonTransversal(String),

    #[error("trajectory diverged at t = {t}: |state| = {magnitude:e}")]
    Divergence { t: f64, magnitude: f64 },

    #[error("quiescent: reference amplitude {amplitude:e} below floor {floor:e}")]
    Quiescent { amplitude: f64, floor: f64 },

    #[error("unsettled: {0}")]
    Unsettled(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ill-conditioned basis: condition number {0:e}")]
    IllConditionedBasis(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
