//! Direct numerical integration of the equation by the method of steps:
//! classical RK4 with the delayed term read from stored history through
//! cubic Hermite dense output.
//!
//! The step is snapped to `tau / m` (integer `m >= 10`), so the delayed
//! argument of every full-step stage lands exactly on a stored node and only
//! the half-step stages interpolate.

use crate::error::{DdeError, Result};
use crate::params::DdeParams;
use crate::series::{eval_series, eval_series_derivative, TruncationPolicy};
use crate::trace::{EvalGrid, Method, SolutionTrace, TraceMeta};

/// Divergence guard: deterministic error instead of a platform overflow.
const DIVERGENCE_LIMIT: f64 = 1e300;

/// The initial function `phi` on `[-tau, 0]`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialFunction {
    /// Seed from the Gaussian series itself (requires the series regime).
    FromSeries,
    /// Constant history.
    Constant(f64),
    /// Tabulated history with strictly increasing times spanning `[-tau, 0]`;
    /// sampled by linear interpolation.
    Table { times: Vec<f64>, values: Vec<f64> },
}

impl InitialFunction {
    /// Validated table constructor.
    pub fn table(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(DdeError::InvalidInput(format!(
                "table has {} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.len() < 2 {
            return Err(DdeError::InvalidInput("table needs at least 2 rows".into()));
        }
        if times.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(DdeError::InvalidInput("table entries must be finite".into()));
        }
        for pair in times.windows(2) {
            if pair[0] >= pair[1] {
                return Err(DdeError::InvalidInput(format!(
                    "table times must be strictly increasing ({} then {})",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(Self::Table { times, values })
    }

    /// Parses two-column numeric text (time value per line; blank lines and
    /// `#` comments ignored).
    pub fn from_table_text(text: &str) -> Result<Self> {
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (t, v) = match (fields.next(), fields.next(), fields.next()) {
                (Some(t), Some(v), None) => (t, v),
                _ => {
                    return Err(DdeError::InvalidInput(format!(
                        "line {}: expected exactly two columns",
                        lineno + 1
                    )))
                }
            };
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| {
                    DdeError::InvalidInput(format!("line {}: bad number {s:?}", lineno + 1))
                })
            };
            times.push(parse(t)?);
            values.push(parse(v)?);
        }
        Self::table(times, values)
    }

    /// Value and slope at `t` in `[-tau, 0]`.
    fn sample(&self, p: &DdeParams, pol: &TruncationPolicy, t: f64) -> Result<(f64, f64)> {
        match self {
            InitialFunction::FromSeries => Ok((
                eval_series(p, t, pol)?,
                eval_series_derivative(p, t, pol)?,
            )),
            InitialFunction::Constant(v) => Ok((*v, 0.0)),
            InitialFunction::Table { times, values } => {
                let first = times[0];
                let last = *times.last().unwrap();
                // slack absorbs the tau -> m h snapping rounding
                let slack = 1e-9 * (last - first).max(1.0);
                if t < first - slack || t > last + slack {
                    return Err(DdeError::OutOfHistory { t, start: first, end: last });
                }
                let t = t.clamp(first, last);
                let idx = match times.binary_search_by(|probe| probe.partial_cmp(&t).unwrap()) {
                    Ok(i) => i.min(times.len() - 2),
                    Err(i) => i.saturating_sub(1).min(times.len() - 2),
                };
                let (t0, t1) = (times[idx], times[idx + 1]);
                let (v0, v1) = (values[idx], values[idx + 1]);
                let slope = (v1 - v0) / (t1 - t0);
                Ok((v0 + slope * (t - t0), slope))
            }
        }
    }
}

/// Interpolation scheme for the dense output (only cubic Hermite is
/// implemented; the field exists so a config spells out what it gets).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    #[default]
    CubicHermite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    /// Requested step; snapped down to `tau / m` with integer `m >= 10`.
    pub h: f64,
    pub interpolation: Interpolation,
    pub t_end: f64,
}

impl StepperConfig {
    pub fn new(h: f64, t_end: f64) -> Result<Self> {
        if !h.is_finite() || h <= 0.0 {
            return Err(DdeError::InvalidInput(format!("step must be positive, got {h}")));
        }
        if !t_end.is_finite() || t_end <= 0.0 {
            return Err(DdeError::InvalidInput(format!("t_end must be positive, got {t_end}")));
        }
        Ok(Self { h, interpolation: Interpolation::CubicHermite, t_end })
    }
}

/// One stored node: value and slope (the equation right-hand side there).
#[derive(Debug, Clone, Copy, PartialEq)]
struct HistoryPoint {
    x: f64,
    dx: f64,
}

/// Equidistant `(t, X, X')` record covering `[-tau_snapped, t_last]`.
#[derive(Debug, Clone, PartialEq)]
pub struct History {
    t0: f64,
    step: f64,
    points: Vec<HistoryPoint>,
}

impl History {
    pub fn start(&self) -> f64 {
        self.t0
    }

    pub fn end(&self) -> f64 {
        self.node_time(self.points.len() - 1)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    fn node_time(&self, i: usize) -> f64 {
        self.t0 + self.step * i as f64
    }

    /// Hermite value between nodes `i` and `i+1` at local coordinate
    /// `theta` in [0, 1].
    fn hermite(&self, i: usize, theta: f64) -> f64 {
        let p0 = &self.points[i];
        let p1 = &self.points[i + 1];
        let h = self.step;
        let t2 = theta * theta;
        let t3 = t2 * theta;
        (2.0 * t3 - 3.0 * t2 + 1.0) * p0.x
            + (t3 - 2.0 * t2 + theta) * h * p0.dx
            + (-2.0 * t3 + 3.0 * t2) * p1.x
            + (t3 - t2) * h * p1.dx
    }

    /// Dense-output sample; exact at nodes.
    pub fn sample(&self, t: f64) -> Result<f64> {
        let last = self.points.len() - 1;
        let u = (t - self.t0) / self.step;
        let slack = 1e-9;
        if u < -slack || u > last as f64 + slack {
            return Err(DdeError::OutOfHistory { t, start: self.t0, end: self.end() });
        }
        let i = (u.floor().max(0.0) as usize).min(last.saturating_sub(1));
        // bit-exact node hits take the stored value
        if t == self.node_time(i) {
            return Ok(self.points[i].x);
        }
        if t == self.node_time(i + 1) {
            return Ok(self.points[i + 1].x);
        }
        Ok(self.hermite(i, u - i as f64))
    }
}

/// Free-function form of [`History::sample`].
pub fn history_sample(history: &History, t: f64) -> Result<f64> {
    history.sample(t)
}

/// A finished integration: full history (initial segment included) plus the
/// node count of the forward part.
#[derive(Debug, Clone, PartialEq)]
pub struct DdeIntegration {
    pub history: History,
    /// Nodes per delay interval (`h = tau / m`).
    pub nodes_per_delay: usize,
    /// Forward steps taken from t = 0.
    pub steps: usize,
}

impl DdeIntegration {
    /// Sample anywhere in `[-tau, t_end]`.
    pub fn sample(&self, t: f64) -> Result<f64> {
        self.history.sample(t)
    }

    /// The trace over `[0, steps * h]` at node spacing.
    pub fn trace(&self) -> Result<SolutionTrace> {
        let h = self.history.step;
        let m = self.nodes_per_delay;
        let values: Vec<f64> = self.history.points[m..].iter().map(|p| p.x).collect();
        let grid = EvalGrid::new(0.0, self.steps as f64 * h, self.steps + 1)?;
        SolutionTrace::new(
            grid,
            values,
            Method::Steps,
            TraceMeta { step: Some(h), ..TraceMeta::default() },
        )
    }
}

/// Integrates `X'(t) = -a t X(t) + b X(t - tau)` from `phi` on `[-tau, 0]`
/// to at least `t_end`, returning the dense integration record.
pub fn integrate_dde_dense(
    p: &DdeParams,
    phi: &InitialFunction,
    cfg: &StepperConfig,
) -> Result<DdeIntegration> {
    if p.tau() <= 0.0 {
        return Err(DdeError::InvalidDelay { tau: p.tau() });
    }
    let tau = p.tau();
    let m = ((tau / cfg.h).ceil() as usize).max(10);
    let h = tau / m as f64;
    let steps = ((cfg.t_end / h).ceil() as usize).max(1);
    // snapped delay: exactly m nodes, so t0 + m h = 0 exactly
    let t0 = -(m as f64) * h;

    let pol = TruncationPolicy::default();
    let mut points = Vec::with_capacity(m + steps + 1);
    for j in 0..=m {
        let t = t0 + h * j as f64;
        let (x, dx) = phi.sample(p, &pol, t.min(0.0))?;
        points.push(HistoryPoint { x, dx });
    }

    let a = p.a();
    let b = p.b();
    let rhs = |t: f64, x: f64, delayed: f64| -a * t * x + b * delayed;

    for n in 0..steps {
        let i = m + n; // current node index
        let t_n = t0 + h * i as f64;
        let x_n = points[i].x;

        // delayed samples: full stages hit nodes i-m and i-m+1 exactly,
        // half stages interpolate at theta = 1/2 on that same segment
        let d0 = points[i - m].x;
        let d1 = points[i - m + 1].x;
        let dh = {
            let lo = &points[i - m];
            let hi = &points[i - m + 1];
            // Hermite at theta = 1/2
            0.5 * (lo.x + hi.x) + h / 8.0 * (lo.dx - hi.dx)
        };

        let k1 = rhs(t_n, x_n, d0);
        let k2 = rhs(t_n + h / 2.0, x_n + h / 2.0 * k1, dh);
        let k3 = rhs(t_n + h / 2.0, x_n + h / 2.0 * k2, dh);
        let k4 = rhs(t_n + h, x_n + h * k3, d1);
        let x_next = x_n + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        let t_next = t0 + h * (i + 1) as f64;
        if !x_next.is_finite() || x_next.abs() > DIVERGENCE_LIMIT {
            return Err(DdeError::DivergenceDetected { t: t_next, limit: DIVERGENCE_LIMIT });
        }
        let dx_next = rhs(t_next, x_next, d1);
        points.push(HistoryPoint { x: x_next, dx: dx_next });
    }

    Ok(DdeIntegration {
        history: History { t0, step: h, points },
        nodes_per_delay: m,
        steps,
    })
}

/// Convenience wrapper returning just the forward trace.
pub fn integrate_dde(
    p: &DdeParams,
    phi: &InitialFunction,
    cfg: &StepperConfig,
) -> Result<SolutionTrace> {
    integrate_dde_dense(p, phi, cfg)?.trace()
}

/// The equation residual `X'(t) + a t X(t) - b X(t - tau)` for any
/// evaluation function. Uses the supplied analytic derivative when given,
/// otherwise central differences with `h = 1e-6 max(1, |t|)`.
pub fn residual<F>(p: &DdeParams, x_of: F, x_prime: Option<&dyn Fn(f64) -> f64>, t: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let dx = match x_prime {
        Some(d) => d(t),
        None => {
            let h = 1e-6 * t.abs().max(1.0);
            (x_of(t + h) - x_of(t - h)) / (2.0 * h)
        }
    };
    dx + p.a() * t * x_of(t) - p.b() * x_of(t - p.tau())
}
