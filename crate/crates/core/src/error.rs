use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its admissible set (α ≤ −1, L ≤ 0, n = 0, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Evaluation point outside the half-line.
    #[error("argument {x} is outside the domain [0, ∞)")]
    Domain { x: f64 },

    /// Degree or argument outside the envelope where the recurrence is trusted.
    #[error("outside the supported evaluation envelope: {0}")]
    Range(String),

    #[error("Newton polish of Laguerre zero {index} did not converge")]
    ZeroNotConverged { index: usize },

    #[error("singular Jacobian: pivot {pivot:e} below threshold {threshold:e}")]
    SingularJacobian { pivot: f64, threshold: f64 },

    #[error("integrator step underflow at x = {x} (h = {h:e})")]
    StepUnderflow { x: f64, h: f64 },

    #[error("no sign change up to x_max = {x_max}")]
    NoZeroFound { x_max: f64 },

    #[error("polytropic index {0} is not supported here")]
    UnsupportedIndex(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
