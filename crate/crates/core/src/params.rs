//! Parameter records, regime classification, and derived quantities.

use crate::error::{DdeError, Result};

/// The quadruple `(a, b, tau, c)` defining the equation
/// `X'(t) + a t X(t) = b X(t - tau)` and the solution scale `c`.
///
/// All fields are validated finite at construction; `c` may be any real,
/// including 0 (the trivial solution).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdeParams {
    a: f64,
    b: f64,
    tau: f64,
    c: f64,
}

impl DdeParams {
    pub fn new(a: f64, b: f64, tau: f64, c: f64) -> Result<Self> {
        for (name, value) in [("a", a), ("b", b), ("tau", tau), ("c", c)] {
            if !value.is_finite() {
                return Err(DdeError::NonFinite { name, value });
            }
        }
        Ok(Self { a, b, tau, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// The map `(t, b, tau) -> (-t, -b, -tau)` that leaves the solution
    /// unchanged; negation is exact, so both parameter sets evaluate
    /// bit-identically.
    pub fn mirrored(&self) -> Self {
        Self {
            a: self.a,
            b: -self.b,
            tau: -self.tau,
            c: self.c,
        }
    }
}

/// Dimensionless quantities driving the series coefficients:
/// `r = b/(a tau)`, `alpha = exp(-a tau^2)`, `beta = r exp(-a tau^2 / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Which of the mutually exclusive solution regimes the parameters fall in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `a > 0`, `tau != 0`: the Gaussian series converges (either delay sign).
    SeriesRegime,
    /// `tau = 0`, `a != 0`: single-Gaussian closed form.
    NoDelay,
    /// `a = 0`, `tau != 0`: constant-coefficient delay equation, Lambert modes.
    Hayes,
    /// `a = 0`, `tau = 0`: plain exponential.
    PureExponential,
    /// `a < 0`, `tau != 0`: solutions grow like `exp(-a t^2 / 2)`.
    Divergent,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::SeriesRegime => "series_regime",
            Regime::NoDelay => "no_delay",
            Regime::Hayes => "hayes",
            Regime::PureExponential => "pure_exponential",
            Regime::Divergent => "divergent",
        }
    }
}

/// Total classification of finite parameters by the sign pattern of `a`
/// and `tau`.
///
/// The delay sign is not distinguished: `a > 0` with `tau < 0` is still
/// [`Regime::SeriesRegime`] (the series formula is sign-symmetric), and
/// `a = 0` with `tau < 0` falls in [`Regime::Hayes`].
pub fn classify_regime(p: &DdeParams) -> Regime {
    if p.tau == 0.0 {
        if p.a == 0.0 {
            Regime::PureExponential
        } else {
            Regime::NoDelay
        }
    } else if p.a > 0.0 {
        Regime::SeriesRegime
    } else if p.a < 0.0 {
        Regime::Divergent
    } else {
        Regime::Hayes
    }
}

/// Computes `r`, `alpha`, `beta` for `a != 0`, `tau != 0`.
pub fn derive_params(p: &DdeParams) -> Result<DerivedParams> {
    if p.a == 0.0 || p.tau == 0.0 {
        return Err(DdeError::DegenerateParams(
            "derived parameters need a != 0 and tau != 0",
        ));
    }
    let r = p.b / (p.a * p.tau);
    let half_exponent = -p.a * p.tau * p.tau / 2.0;
    Ok(DerivedParams {
        r,
        alpha: (2.0 * half_exponent).exp(),
        beta: r * half_exponent.exp(),
    })
}
