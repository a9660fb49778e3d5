//! Evaluation and analysis toolkit for the non-autonomous delay differential
//! equation
//!
//! ```text
//!     X'(t) + a t X(t) = b X(t - tau)
//! ```
//!
//! For `a > 0` and `tau != 0` the solution on the whole real line is a
//! superposition of Gaussians centred at `t = n tau`,
//!
//! ```text
//!     X(t) = C sum_{n>=0} (1/n!) (b / (a tau))^n exp(-a (t - n tau)^2 / 2),
//! ```
//!
//! and the crate evaluates it three independent ways so the routes can be
//! cross-validated:
//!
//! * [`series`] — direct log-space summation of the Gaussian series, its
//!   derivative, and the generating function behind it;
//! * [`quadrature`] — the equivalent real Fourier integral via composite
//!   Gauss–Legendre panels;
//! * [`stepper`] — method-of-steps RK4 integration of the equation itself
//!   with cubic Hermite dense output.
//!
//! [`envelope`] provides the enclosing curve `G(t)`, the continuous envelope
//! `E(t)`, and the peak-location estimate `n*`. [`classify`] provides
//! stability verdicts and, for the constant-coefficient case `a = 0`, the
//! characteristic roots via the multi-branch Lambert W function implemented
//! in [`specfn`].
//!
//! All types are immutable value records and all operations are pure, so
//! everything here can be called from any number of concurrent workers.

// Reference constants are kept at their full published precision.
#![allow(clippy::excessive_precision)]

pub mod classify;
pub mod envelope;
pub mod error;
pub mod params;
pub mod quadrature;
pub mod series;
pub mod specfn;
pub mod stepper;
pub mod trace;

pub use error::{DdeError, Result};
pub use params::{classify_regime, derive_params, DdeParams, DerivedParams, Regime};
pub use trace::{EvalGrid, Method, SolutionTrace, TraceMeta};
