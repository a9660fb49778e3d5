//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, DdeError>;

/// Everything that can go wrong while evaluating or integrating the equation.
#[derive(Debug, Error)]
pub enum DdeError {
    /// A parameter was NaN or infinite at construction time.
    #[error("parameter `{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    /// An operation was called outside its parameter domain
    /// (e.g. the series with `a <= 0` or `tau = 0`).
    #[error("degenerate parameters: {0}")]
    DegenerateParams(&'static str),

    /// The true result exceeds the representable f64 range.
    #[error("result magnitude exceeds the f64 range (log-magnitude {log_magnitude:.3})")]
    Overflow { log_magnitude: f64 },

    /// Quadrature self-check failed: doubling the panel count moved the
    /// result by more than the requested tolerance.
    #[error("quadrature tolerance not met: estimated error {estimated:.3e} > tol {tolerance:.3e}")]
    ToleranceNotMet { estimated: f64, tolerance: f64 },

    /// An iteration hit its cap without meeting the residual criterion.
    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    /// Lambert W stalled next to the branch point -1/e on a branch that does
    /// not pass through it.
    #[error("Lambert W stalled within 1e-12 of the branch point -1/e on branch {k}")]
    BranchPointSingularity { k: i32 },

    /// The method of steps needs a strictly positive delay.
    #[error("method of steps requires tau > 0, got tau = {tau}")]
    InvalidDelay { tau: f64 },

    /// The trajectory escaped past the divergence guard.
    #[error("|X| exceeded {limit:.1e} at t = {t:.6e}")]
    DivergenceDetected { t: f64, limit: f64 },

    /// A dense-output sample was requested outside the recorded span.
    #[error("t = {t} is outside the recorded history [{start}, {end}]")]
    OutOfHistory { t: f64, start: f64, end: f64 },

    /// Malformed argument that is not a numeric-domain issue.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
