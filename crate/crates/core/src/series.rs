//! The Gaussian-series solution
//!
//! ```text
//!     X(t) = c sum_{n=0}^{N} X_n(t),
//!     X_n(t) = (1/n!) r^n exp(-a (t - n tau)^2 / 2),   r = b / (a tau)
//! ```
//!
//! valid for `a > 0`, `tau != 0` (either delay sign). All term arithmetic is
//! done in log space with sign tracking; the final sum rescales by the peak
//! log-magnitude and accumulates with Kahan compensation, so `r >> 1`
//! (coefficients peak near `e^r`) and alternating signs for `b < 0` are both
//! handled without overflow or catastrophic cancellation.

use crate::error::{DdeError, Result};
use crate::params::{DdeParams, DerivedParams};
use crate::specfn::log_factorial;
use crate::trace::{EvalGrid, Method, SolutionTrace, TraceMeta};

/// Natural log of `f64::MAX`.
const LOG_F64_MAX: f64 = 709.782_712_893_384;

/// A signed magnitude in log space. `sign = 0` iff the value is exactly zero
/// (`log_mag = -inf` then).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogTerm {
    pub sign: i8,
    pub log_mag: f64,
}

impl LogTerm {
    pub fn zero() -> Self {
        Self { sign: 0, log_mag: f64::NEG_INFINITY }
    }

    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self::zero()
        } else {
            Self { sign: if v > 0.0 { 1 } else { -1 }, log_mag: v.abs().ln() }
        }
    }

    pub fn value(&self) -> f64 {
        self.sign as f64 * self.log_mag.exp()
    }
}

/// How many terms to sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationMode {
    /// Always sum `n_max + 1` terms.
    Fixed,
    /// Stop once every remaining coefficient is below `epsilon` times the
    /// peak coefficient (never past `n_max`).
    Adaptive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub mode: TruncationMode,
    pub n_max: u32,
    pub epsilon: f64,
}

impl TruncationPolicy {
    pub const DEFAULT_N_MAX: u32 = 500;
    pub const DEFAULT_EPSILON: f64 = 1e-15;

    pub fn fixed(n_max: u32) -> Result<Self> {
        if n_max < 1 {
            return Err(DdeError::InvalidInput("n_max must be at least 1".into()));
        }
        Ok(Self { mode: TruncationMode::Fixed, n_max, epsilon: Self::DEFAULT_EPSILON })
    }

    pub fn adaptive(epsilon: f64) -> Result<Self> {
        if epsilon.is_nan() || epsilon <= 0.0 {
            return Err(DdeError::InvalidInput("epsilon must be positive".into()));
        }
        Ok(Self { mode: TruncationMode::Adaptive, n_max: Self::DEFAULT_N_MAX, epsilon })
    }

    pub fn adaptive_capped(epsilon: f64, n_max: u32) -> Result<Self> {
        let mut pol = Self::adaptive(epsilon)?;
        if n_max < 1 {
            return Err(DdeError::InvalidInput("n_max must be at least 1".into()));
        }
        pol.n_max = n_max;
        Ok(pol)
    }
}

impl Default for TruncationPolicy {
    /// Adaptive at 1e-15 capped at 500 terms.
    fn default() -> Self {
        Self {
            mode: TruncationMode::Adaptive,
            n_max: Self::DEFAULT_N_MAX,
            epsilon: Self::DEFAULT_EPSILON,
        }
    }
}

fn require_series_regime(p: &DdeParams) -> Result<f64> {
    if p.a() <= 0.0 || p.tau() == 0.0 {
        return Err(DdeError::DegenerateParams(
            "the Gaussian series needs a > 0 and tau != 0",
        ));
    }
    Ok(p.b() / (p.a() * p.tau()))
}

/// ln of the coefficient `|r|^n / n!` (the Gaussian peak height for term n).
/// `sign = sign(r)^n`; `n = 0` is exactly 1 even when `r = 0`.
fn log_coefficient(r: f64, n: u32) -> LogTerm {
    if n == 0 {
        return LogTerm { sign: 1, log_mag: 0.0 };
    }
    if r == 0.0 {
        return LogTerm::zero();
    }
    let sign = if r > 0.0 || n.is_multiple_of(2) { 1 } else { -1 };
    LogTerm { sign, log_mag: n as f64 * r.abs().ln() - log_factorial(n) }
}

/// The signed log-magnitude of one Gaussian term `c X_n(t)`.
pub fn series_term(p: &DdeParams, n: u32, t: f64) -> Result<LogTerm> {
    let r = require_series_regime(p)?;
    if p.c() == 0.0 {
        return Ok(LogTerm::zero());
    }
    let coeff = log_coefficient(r, n);
    if coeff.sign == 0 {
        return Ok(LogTerm::zero());
    }
    let offset = t - n as f64 * p.tau();
    let sign = coeff.sign * if p.c() > 0.0 { 1 } else { -1 };
    Ok(LogTerm {
        sign,
        log_mag: p.c().abs().ln() + coeff.log_mag - p.a() * offset * offset / 2.0,
    })
}

/// Truncation index `N`: `Fixed` returns `n_max`; `Adaptive` returns the
/// smallest `N` such that every coefficient past it is below
/// `epsilon * max_n |r|^n/n!` (the Gaussian factor is bounded by 1, so one
/// `N` serves every `t`). Falls back to `n_max` outside the series regime.
pub fn choose_truncation(p: &DdeParams, pol: &TruncationPolicy) -> u32 {
    if pol.mode == TruncationMode::Fixed || p.a() <= 0.0 || p.tau() == 0.0 {
        return pol.n_max;
    }
    let r = p.b() / (p.a() * p.tau());
    adaptive_cutoff(r.abs(), pol)
}

fn adaptive_cutoff(abs_r: f64, pol: &TruncationPolicy) -> u32 {
    // ln(|r|^n / n!) climbs until n ~ |r| and falls monotonically after, so
    // the last index at or above the threshold is the cutoff.
    let mut peak = 0.0f64; // n = 0 coefficient is 1
    let mut logs = Vec::with_capacity(pol.n_max as usize + 1);
    logs.push(0.0f64);
    if abs_r == 0.0 {
        return 0;
    }
    let ln_r = abs_r.ln();
    for n in 1..=pol.n_max {
        let l = n as f64 * ln_r - log_factorial(n);
        peak = peak.max(l);
        logs.push(l);
    }
    let threshold = pol.epsilon.ln() + peak;
    for n in (0..=pol.n_max).rev() {
        if logs[n as usize] >= threshold {
            return n;
        }
    }
    0
}

#[derive(Debug, Clone, Copy, Default)]
struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    #[inline]
    fn add(&mut self, value: f64) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Term-major evaluation core shared by value and derivative sums.
///
/// For each grid point accumulates `sum_n s_n W_n(t) exp(g_n(t) - M)` where
/// `M` is the peak coefficient log and `W_n` an optional linear-space weight
/// (1 for the plain series, `-a (t - n tau)` for the derivative); the common
/// factor `c e^M` is applied at the end.
fn sum_terms(
    p: &DdeParams,
    points: &[f64],
    pol: &TruncationPolicy,
    derivative: bool,
) -> Result<(Vec<f64>, u32)> {
    let r = require_series_regime(p)?;
    let n_max = choose_truncation(p, pol);
    if p.c() == 0.0 {
        return Ok((vec![0.0; points.len()], n_max));
    }

    // coefficient logs and the rescaling peak
    let mut coeff = Vec::with_capacity(n_max as usize + 1);
    let mut peak = f64::NEG_INFINITY;
    for n in 0..=n_max {
        let lc = log_coefficient(r, n);
        if lc.sign != 0 {
            peak = peak.max(lc.log_mag);
        }
        coeff.push(lc);
    }

    let a = p.a();
    let tau = p.tau();
    let mut acc = vec![KahanSum::default(); points.len()];
    for (n, lc) in coeff.iter().enumerate() {
        if lc.sign == 0 {
            continue;
        }
        let center = n as f64 * tau;
        let scaled = lc.log_mag - peak;
        let sign = lc.sign as f64;
        for (slot, &t) in acc.iter_mut().zip(points) {
            let offset = t - center;
            let gaussian = (scaled - a * offset * offset / 2.0).exp();
            let weight = if derivative { -a * offset } else { 1.0 };
            slot.add(sign * weight * gaussian);
        }
    }

    // apply c * e^M, watching for genuine overflow
    let log_scale = p.c().abs().ln() + peak;
    let sign_c = if p.c() > 0.0 { 1.0 } else { -1.0 };
    let mut values = Vec::with_capacity(points.len());
    if log_scale <= 700.0 {
        let scale = sign_c * log_scale.exp();
        for s in &acc {
            values.push(scale * s.sum);
        }
    } else {
        for s in &acc {
            let total = s.sum;
            if total == 0.0 {
                values.push(0.0);
                continue;
            }
            let log_total = log_scale + total.abs().ln();
            if log_total > LOG_F64_MAX {
                return Err(DdeError::Overflow { log_magnitude: log_total });
            }
            values.push(sign_c * total.signum() * log_total.exp());
        }
    }
    Ok((values, n_max))
}

/// `X(t)` by log-space rescaled compensated summation.
pub fn eval_series(p: &DdeParams, t: f64, pol: &TruncationPolicy) -> Result<f64> {
    Ok(sum_terms(p, &[t], pol, false)?.0[0])
}

/// `X'(t)` via the termwise derivative `X_n'(t) = -a (t - n tau) X_n(t)`.
pub fn eval_series_derivative(p: &DdeParams, t: f64, pol: &TruncationPolicy) -> Result<f64> {
    Ok(sum_terms(p, &[t], pol, true)?.0[0])
}

/// `X` on a whole grid (term-major, one pass per Gaussian).
pub fn eval_series_grid(p: &DdeParams, grid: &EvalGrid, pol: &TruncationPolicy) -> Result<SolutionTrace> {
    let points: Vec<f64> = grid.nodes().collect();
    let (values, n_max) = sum_terms(p, &points, pol, false)?;
    SolutionTrace::new(
        *grid,
        values,
        Method::Series,
        TraceMeta { max_term: Some(n_max), ..TraceMeta::default() },
    )
}

/// `X'` on a whole grid.
pub fn eval_series_derivative_grid(
    p: &DdeParams,
    grid: &EvalGrid,
    pol: &TruncationPolicy,
) -> Result<SolutionTrace> {
    let points: Vec<f64> = grid.nodes().collect();
    let (values, n_max) = sum_terms(p, &points, pol, true)?;
    SolutionTrace::new(
        *grid,
        values,
        Method::Series,
        TraceMeta { max_term: Some(n_max), ..TraceMeta::default() },
    )
}

/// ln of the `n`-th Taylor coefficient of the generating function `f`,
/// `gamma_n = r^n alpha^{n^2/2} / n!` (scale `c = 1`).
pub fn f_log_coefficient(d: &DerivedParams, n: u32) -> LogTerm {
    let base = log_coefficient(d.r, n);
    if base.sign == 0 {
        return base;
    }
    let n2 = n as f64 * n as f64;
    LogTerm {
        sign: base.sign,
        log_mag: base.log_mag + n2 / 2.0 * d.alpha.ln(),
    }
}

/// The generating function `f(x) = sum_n gamma_n x^n` behind the series:
/// `X(t) = c exp(-a t^2/2) f(exp(a tau t))`. Scale `c = 1`.
pub fn eval_f(d: &DerivedParams, x: f64, pol: &TruncationPolicy) -> Result<f64> {
    if d.alpha.is_nan() || d.alpha <= 0.0 || d.alpha >= 1.0 {
        return Err(DdeError::DegenerateParams(
            "the generating function needs alpha in (0, 1), i.e. a > 0 and tau != 0",
        ));
    }
    if x < 0.0 {
        return Err(DdeError::InvalidInput(format!(
            "f is evaluated on x >= 0 (x = exp(a tau t)), got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(1.0);
    }

    let ln_x = x.ln();
    // term logs: unimodal in n, so track the peak and stop once the tail
    // drops epsilon below it (Adaptive) or at n_max (Fixed)
    let mut logs = Vec::with_capacity(64);
    let mut peak = f64::NEG_INFINITY;
    for n in 0..=pol.n_max {
        let lc = f_log_coefficient(d, n);
        let term = LogTerm {
            sign: lc.sign,
            log_mag: lc.log_mag + n as f64 * ln_x,
        };
        if term.sign != 0 {
            peak = peak.max(term.log_mag);
            if pol.mode == TruncationMode::Adaptive
                && term.log_mag < peak + pol.epsilon.ln()
                && (n as f64) > d.r.abs() * x
            {
                logs.push(term);
                break;
            }
        }
        logs.push(term);
    }

    let mut acc = KahanSum::default();
    for term in &logs {
        if term.sign != 0 {
            acc.add(term.sign as f64 * (term.log_mag - peak).exp());
        }
    }
    if acc.sum == 0.0 {
        return Ok(0.0);
    }
    let log_total = peak + acc.sum.abs().ln();
    if log_total > LOG_F64_MAX {
        return Err(DdeError::Overflow { log_magnitude: log_total });
    }
    if peak <= 700.0 {
        Ok(peak.exp() * acc.sum)
    } else {
        Ok(acc.sum.signum() * log_total.exp())
    }
}

/// The `tau = 0` closed form `X(t) = c exp(-a t^2 / 2 + b t)`.
pub fn closed_form_no_delay(p: &DdeParams, t: f64) -> Result<f64> {
    if p.tau() != 0.0 {
        return Err(DdeError::DegenerateParams("closed form applies only at tau = 0"));
    }
    if p.c() == 0.0 {
        return Ok(0.0);
    }
    let exponent = -p.a() * t * t / 2.0 + p.b() * t;
    let log_mag = p.c().abs().ln() + exponent;
    if log_mag > LOG_F64_MAX {
        return Err(DdeError::Overflow { log_magnitude: log_mag });
    }
    Ok(p.c().signum() * exponent.exp() * p.c().abs())
}
