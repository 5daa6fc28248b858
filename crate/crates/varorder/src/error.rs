use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Argument on (or too close to) a branch cut.
    #[error("branch error: {0}")]
    Branch(String),

    /// A numerical method could not reach its accuracy target.
    #[error("precision error: {0}")]
    Precision(String),

    /// An iterative solver failed to converge to its contracted residual.
    #[error("numerics error: {0}")]
    Numerics(String),

    /// A caller-side contract was violated (mismatched meshes, stale fields, ...).
    #[error("contract error: {0}")]
    Contract(String),

    /// Rejection sampling exhausted its retry budget.
    #[error("genericity error: {0}")]
    Genericity(String),

    /// No separating functional exists for the requested vertex.
    #[error("separation error: {0}")]
    Separation(String),

    /// Inconsistent or insufficient geometric data.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Invalid run configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Requested combination of shapes or dimensions is not supported.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
