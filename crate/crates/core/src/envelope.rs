//! The enclosing curve `G(t)`, the continuous envelope `E(t)`, the peak
//! index `n*`, and the maximum-amplitude estimate.
//!
//! `G(t)` is the signed value of the pointwise-dominant Gaussian; `E(t)`
//! interpolates the peak heights `X_n(n tau)` through the reciprocal gamma
//! function, so it is defined for all real `t` and vanishes exactly at the
//! gamma poles `t = -m tau`.

use crate::error::{DdeError, Result};
use crate::params::{derive_params, DdeParams, DerivedParams};
use crate::series::{choose_truncation, eval_series, series_term, TruncationPolicy};
use crate::specfn::{log_factorial, reciprocal_gamma};
use crate::trace::{EvalGrid, Method, SolutionTrace, TraceMeta};

/// Index (or tied pair) maximising the peak-height sequence `|r|^n / n!`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakIndex {
    /// One element, or two consecutive ones when `|r|` is a positive integer.
    pub indices: Vec<u32>,
    /// ln of the winning `|r|^n / n!`.
    pub peak_log_amp: f64,
}

/// Peak estimate produced by [`max_estimate`].
#[derive(Debug, Clone, PartialEq)]
pub struct MaxEstimate {
    /// `n* tau` (smaller index on ties).
    pub t_star: f64,
    /// `|X(t_star)|`.
    pub amp: f64,
    /// Set when the peak is tied or the runner-up height is within 1% of
    /// it, which makes the location estimate unreliable.
    pub ambiguous: bool,
    pub peak: PeakIndex,
}

fn log_peak_height(abs_r: f64, n: u32) -> f64 {
    if n == 0 {
        0.0
    } else if abs_r == 0.0 {
        f64::NEG_INFINITY
    } else {
        n as f64 * abs_r.ln() - log_factorial(n)
    }
}

/// Argmax over `n in [0, cap]` of `|r|^n / n!` in log space. Exact integer
/// `|r|` yields the tied pair `{|r| - 1, |r|}`.
pub fn n_star(d: &DerivedParams, cap: u32) -> PeakIndex {
    let abs_r = d.r.abs();
    let mut best = 0u32;
    let mut best_log = 0.0f64;
    for n in 1..=cap {
        let l = log_peak_height(abs_r, n);
        if l > best_log {
            best = n;
            best_log = l;
        }
    }
    // ratio h_n / h_{n-1} = |r| / n hits 1 exactly when |r| is an integer
    if abs_r == abs_r.floor() && abs_r >= 1.0 && abs_r <= cap as f64 {
        let k = abs_r as u32;
        return PeakIndex {
            indices: vec![k - 1, k],
            peak_log_amp: log_peak_height(abs_r, k),
        };
    }
    PeakIndex { indices: vec![best], peak_log_amp: best_log }
}

/// `G(t)`: the signed value of the dominant Gaussian at `t` (ties broken
/// toward smaller `n`).
pub fn eval_g(p: &DdeParams, t: f64, pol: &TruncationPolicy) -> Result<f64> {
    let d = derive_params_series(p)?;
    let n_max = choose_truncation(p, pol);
    let dominant = dominant_index(&d, p, t, n_max);
    Ok(series_term(p, dominant, t)?.value())
}

/// `G` on a whole grid.
pub fn eval_g_grid(p: &DdeParams, grid: &EvalGrid, pol: &TruncationPolicy) -> Result<SolutionTrace> {
    let d = derive_params_series(p)?;
    let n_max = choose_truncation(p, pol);
    let mut values = Vec::with_capacity(grid.count());
    for t in grid.nodes() {
        let dominant = dominant_index(&d, p, t, n_max);
        values.push(series_term(p, dominant, t)?.value());
    }
    SolutionTrace::new(
        *grid,
        values,
        Method::EnvelopeG,
        TraceMeta { max_term: Some(n_max), ..TraceMeta::default() },
    )
}

fn derive_params_series(p: &DdeParams) -> Result<DerivedParams> {
    if p.a() <= 0.0 || p.tau() == 0.0 {
        return Err(DdeError::DegenerateParams(
            "the enclosing curve needs a > 0 and tau != 0",
        ));
    }
    derive_params(p)
}

fn dominant_index(d: &DerivedParams, p: &DdeParams, t: f64, n_max: u32) -> u32 {
    let abs_r = d.r.abs();
    let a = p.a();
    let tau = p.tau();
    let mut best = 0u32;
    let mut best_log = -a * t * t / 2.0;
    for n in 1..=n_max {
        if abs_r == 0.0 {
            break;
        }
        let offset = t - n as f64 * tau;
        let l = log_peak_height(abs_r, n) - a * offset * offset / 2.0;
        if l > best_log {
            best = n;
            best_log = l;
        }
    }
    best
}

/// `E(t)` as the `(plus, minus)` branch pair.
///
/// For `b/tau > 0` both entries coincide:
/// `c rgamma(t/tau + 1) r^{t/tau}`; for `b/tau < 0` the pair is
/// `+/- c rgamma(t/tau + 1) (-r)^{t/tau}`.
pub fn eval_e(p: &DdeParams, t: f64) -> Result<(f64, f64)> {
    if p.a() <= 0.0 || p.tau() == 0.0 {
        return Err(DdeError::DegenerateParams(
            "the envelope needs a > 0 and tau != 0",
        ));
    }
    if p.b() == 0.0 {
        return Err(DdeError::DegenerateParams(
            "the envelope excludes b = 0 (single Gaussian, no peak sequence)",
        ));
    }
    let d = derive_params(p)?;
    let s = t / p.tau();
    let rg = reciprocal_gamma(s + 1.0);
    // a > 0, so sign(b/tau) = sign(r)
    if d.r > 0.0 {
        let v = p.c() * rg * d.r.powf(s);
        Ok((v, v))
    } else {
        let v = p.c() * rg * (-d.r).powf(s);
        Ok((v, -v))
    }
}

/// `E` on a whole grid (plus branch, minus branch).
pub fn eval_e_grid(
    p: &DdeParams,
    grid: &EvalGrid,
) -> Result<(SolutionTrace, SolutionTrace)> {
    let mut plus = Vec::with_capacity(grid.count());
    let mut minus = Vec::with_capacity(grid.count());
    for t in grid.nodes() {
        let (vp, vm) = eval_e(p, t)?;
        plus.push(vp);
        minus.push(vm);
    }
    let meta = TraceMeta::default();
    Ok((
        SolutionTrace::new(*grid, plus, Method::EnvelopeE, meta)?,
        SolutionTrace::new(*grid, minus, Method::EnvelopeE, meta)?,
    ))
}

/// Peak location and amplitude estimate: `t* = n* tau`, `amp = |X(t*)|`.
pub fn max_estimate(p: &DdeParams, pol: &TruncationPolicy) -> Result<MaxEstimate> {
    let d = derive_params_series(p)?;
    let cap = choose_truncation(p, pol).max(1);
    let peak = n_star(&d, cap);
    let leader = peak.indices[0];
    let t_star = leader as f64 * p.tau();
    let amp = eval_series(p, t_star, pol)?.abs();

    let mut ambiguous = peak.indices.len() > 1;
    if !ambiguous {
        // runner-up within 1% of the peak makes the location estimate shaky
        let near_tie = (0..=cap)
            .filter(|n| !peak.indices.contains(n))
            .map(|n| log_peak_height(d.r.abs(), n))
            .fold(f64::NEG_INFINITY, f64::max);
        ambiguous = near_tie >= peak.peak_log_amp + 0.99f64.ln();
    }

    Ok(MaxEstimate { t_star, amp, ambiguous, peak })
}
