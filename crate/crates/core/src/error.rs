use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A grid function carried the wrong space tag (physical vs frequency).
    #[error("space tag mismatch: {0}")]
    Tag(String),
    /// A configured resource cap (derivative order, degree) was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("configuration error: {0}")]
    Config(String),
    /// Input that has no Gaussian-times-polynomial representation.
    #[error("not representable in the term algebra: {0}")]
    NotRepresentable(String),
    #[error("tabulated weight is not log-convex: biconjugate gap {gap:.3e} at t = {t}")]
    NonConvex { t: f64, gap: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
