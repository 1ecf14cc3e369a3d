use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum MtfError {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A Fermi-Dirac order outside the supported set was requested.
    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),

    /// Two fields live on different grids.
    #[error("grid mismatch: fields must share the same radial grid")]
    GridMismatch,

    /// A field violates one of its construction invariants.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// Requested geometry is outside the radial reference path.
    #[error("unsupported geometry: {0}")]
    Geometry(String),

    /// A value left the representable floating-point range.
    #[error("range error: {0}")]
    Range(String),

    /// A numerical procedure failed (bracket, quadrature, ...).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A problem is not well posed on the given grid.
    #[error("setup error: {0}")]
    Setup(String),

    /// Run configuration is invalid.
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, MtfError>;
