//! Special-function kernel: complex multi-branch Lambert W, reciprocal
//! gamma, and log-factorial. Self-contained — no external special-function
//! dependencies.

mod gamma;
mod lambert;

pub use gamma::{log_factorial, reciprocal_gamma};
pub use lambert::{lambert_w, BranchIndex};

pub use num_complex::Complex64;
