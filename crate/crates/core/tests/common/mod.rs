//! Shared helpers for the integration-test suites.

use gaussdde::params::DdeParams;
use gaussdde::series::{choose_truncation, series_term, TruncationPolicy};

/// Accounts for the log-space pieces (n ln|r|, ln n!, a(t - n tau)^2/2)
/// whose rounding sets the per-term noise floor.
pub const PIECES_FACTOR: f64 = 2000.0;

/// Sum of term magnitudes `sum_n |c X_n(t)|` and of the termwise-derivative
/// magnitudes `sum_n |a (t - n tau) c X_n(t)|`.
pub fn term_magnitude_sums(p: &DdeParams, t: f64, pol: &TruncationPolicy) -> (f64, f64) {
    let n_max = choose_truncation(p, pol);
    let mut value_sum = 0.0f64;
    let mut derivative_sum = 0.0f64;
    for n in 0..=n_max {
        let term = series_term(p, n, t).unwrap().value().abs();
        value_sum += term;
        derivative_sum += (p.a() * (t - n as f64 * p.tau())).abs() * term;
    }
    (value_sum, derivative_sum)
}

/// Upper bound on the f64 rounding noise of the residual
/// `X'(t) + a t X(t) - b X(t - tau)` evaluated through the series.
///
/// For `b < 0` with strongly overlapping Gaussians the alternating sum
/// cancels by up to ~exp(pi^2/(a tau^2)) relative to its terms, so the
/// computed values carry noise proportional to the term-magnitude sums, not
/// to the results. Instances where this bound eats the assertion tolerance
/// are outside what 53-bit arithmetic can represent at all.
pub fn residual_noise_bound(p: &DdeParams, t: f64, pol: &TruncationPolicy) -> f64 {
    let (value_sum, derivative_sum) = term_magnitude_sums(p, t, pol);
    let (delayed_sum, _) = term_magnitude_sums(p, t - p.tau(), pol);
    f64::EPSILON
        * PIECES_FACTOR
        * (derivative_sum + (p.a() * t).abs() * value_sum + p.b().abs() * delayed_sum + 1.0)
}
