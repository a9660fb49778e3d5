//! Evaluation grids and the trace record exchanged between modules.

use crate::error::{DdeError, Result};

/// A uniform time grid `t_min = t_0 < t_1 < ... < t_{count-1} = t_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalGrid {
    t_min: f64,
    t_max: f64,
    count: usize,
}

impl EvalGrid {
    pub fn new(t_min: f64, t_max: f64, count: usize) -> Result<Self> {
        if !t_min.is_finite() || !t_max.is_finite() {
            return Err(DdeError::InvalidInput(format!(
                "grid bounds must be finite, got [{t_min}, {t_max}]"
            )));
        }
        if t_min >= t_max {
            return Err(DdeError::InvalidInput(format!(
                "grid needs t_min < t_max, got [{t_min}, {t_max}]"
            )));
        }
        if count < 2 {
            return Err(DdeError::InvalidInput(format!(
                "grid needs at least 2 nodes, got {count}"
            )));
        }
        Ok(Self { t_min, t_max, count })
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn step(&self) -> f64 {
        (self.t_max - self.t_min) / (self.count - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i < self.count);
        self.t_min + self.step() * i as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.node(i))
    }
}

/// Which route produced a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Series,
    Integral,
    Steps,
    EnvelopeG,
    EnvelopeE,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Integral => "integral",
            Method::Steps => "steps",
            Method::EnvelopeG => "envelopeG",
            Method::EnvelopeE => "envelopeE",
        }
    }
}

/// Truncation / tolerance metadata attached to a trace.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TraceMeta {
    /// Highest series index summed (series and envelope routes).
    pub max_term: Option<u32>,
    /// Absolute tolerance achieved or requested (integral route).
    pub tolerance: Option<f64>,
    /// Step size used (steps route).
    pub step: Option<f64>,
}

/// A grid, the values on it, and how they were produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTrace {
    pub grid: EvalGrid,
    pub values: Vec<f64>,
    pub method: Method,
    pub meta: TraceMeta,
}

impl SolutionTrace {
    /// Builds a trace, enforcing that the value count matches the grid and
    /// that every value is finite.
    pub fn new(grid: EvalGrid, values: Vec<f64>, method: Method, meta: TraceMeta) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(DdeError::InvalidInput(format!(
                "trace has {} values for a {}-node grid",
                values.len(),
                grid.count()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(DdeError::Overflow {
                log_magnitude: values[bad].abs().ln(),
            });
        }
        Ok(Self { grid, values, method, meta })
    }

    /// Largest absolute value on the trace.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}
