use thiserror::Error;

/// Errors raised by the transform, sampling and checking routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain of its family.
    #[error("domain error: {0}")]
    Domain(String),

    /// A formula cannot be evaluated at the requested point (vanishing denominator, etc).
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// A thinning parameter p(n) falls outside the admissible range of the thinning family.
    #[error("admissibility error: {0}")]
    Admissibility(String),

    /// The certified coefficient-extraction error exceeds the requested tolerance.
    #[error("precision error: certified bound {bound:.3e} exceeds tolerance {tol:.3e} (adjust radius or n_max)")]
    Precision { bound: f64, tol: f64 },

    /// A probability table is unusable for sampling.
    #[error("table error: {0}")]
    Table(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A numerical inversion failed to bracket or converge.
    #[error("inversion failed in bracket [{lo:.6e}, {hi:.6e}]")]
    Inversion { lo: f64, hi: f64 },

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// The sequential Sibuya mechanism hit its iteration cap.
    #[error("sampler hit its iteration cap of {0}")]
    IterationCap(u64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
