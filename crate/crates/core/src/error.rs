use thiserror::Error;

/// Errors raised by the algebraic and numerical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Operand shapes do not fit together (variable counts, vector lengths, indices).
    #[error("structural error: {0}")]
    Structural(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An argument lies outside the admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A constructed object failed its own validation.
    #[error("construction error: {0}")]
    Construction(String),

    /// Level-set sampling did not converge.
    #[error("sampling error: {0}")]
    Sampling(String),

    /// The point is (numerically) critical for the defining function.
    #[error("degenerate gradient: {0}")]
    DegenerateGradient(String),

    /// Eigenvalue clustering is not separated well enough to be trusted.
    #[error("unstable clustering: {0}")]
    Instability(String),

    /// A parallel displacement hit a focal angle.
    #[error("focal angle: {0}")]
    Focal(String),

    /// Declared or derived data contradict each other.
    #[error("inconsistency: {0}")]
    Inconsistency(String),

    /// Text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
