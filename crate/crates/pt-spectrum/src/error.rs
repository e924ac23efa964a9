use thiserror::Error;

/// Errors produced by the solvers, samplers and expectation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Hermite recurrence refused: orders this high overflow in f64.
    #[error("hermite order {n} exceeds the supported maximum {max}")]
    HermiteOrder { n: usize, max: usize },

    /// Evaluation time lies outside the span where data exists.
    #[error("t = {t} outside span [{lo}, {hi}]")]
    OutOfSpan { t: f64, lo: f64, hi: f64 },

    /// Malformed argument (grid bounds, step sizes, mismatched lengths...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Non-finite values or runaway norm during time integration.
    #[error("integration diverged: {0}")]
    Divergence(String),

    /// Grid endpoints carry non-negligible amplitude; results would be
    /// contaminated by domain truncation.
    #[error("grid truncation: {0}")]
    Truncation(String),

    /// Amplitude reached the grid boundary during propagation.
    #[error("boundary reflection: {0}")]
    Reflection(String),

    /// A drive/shift pair fails the defining ODE residual check.
    #[error("drive/solution mismatch: {0}")]
    Consistency(String),

    /// Time parity of a sampled drive cannot be decided on this span.
    #[error("undecidable: {0}")]
    Undecidable(String),

    /// The requested check has no meaning for this input.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// Input outside the capability of the requested method.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
