//! Multi-branch complex Lambert W by Halley iteration.
//!
//! Convergence is judged on the defining-identity residual
//! `|w e^w - z| <= 1e-12 max(1, |z|)`, not on step size — the residual is
//! the contract every caller relies on.

use num_complex::Complex64;
use std::f64::consts::{E, PI};

use crate::error::{DdeError, Result};

/// Branch index `k` of `W_k`, capped at `|k| <= 64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchIndex(i32);

impl BranchIndex {
    pub const MAX_ABS: i32 = 64;
    pub const PRINCIPAL: BranchIndex = BranchIndex(0);

    pub fn new(k: i32) -> Result<Self> {
        if k.abs() > Self::MAX_ABS {
            return Err(DdeError::InvalidInput(format!(
                "branch index |k| <= {} required, got {k}",
                Self::MAX_ABS
            )));
        }
        Ok(Self(k))
    }

    pub fn get(&self) -> i32 {
        self.0
    }
}

const MAX_ITERATIONS: usize = 100;
const BRANCH_POINT: f64 = -1.0 / E;

/// `W_k(z)`: the solution `w` of `w e^w = z` on branch `k`.
///
/// Branch selection follows the standard convention: `k = 0` is the
/// principal branch with `Im w` in `(-pi, pi]`; branch `k` has `Im w`
/// near `2 pi k` asymptotically.
pub fn lambert_w(k: BranchIndex, z: Complex64) -> Result<Complex64> {
    let k = k.get();
    if z.re.is_nan() || z.im.is_nan() {
        return Err(DdeError::InvalidInput("lambert_w: NaN argument".into()));
    }
    if z.re == 0.0 && z.im == 0.0 {
        if k == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(DdeError::InvalidInput(
            "lambert_w: z = 0 is a logarithmic singularity on branches k != 0".into(),
        ));
    }

    let scale = z.norm().max(1.0);
    let accept = 1e-13 * scale; // iterate to here ...
    let contract = 1e-12 * scale; // ... but this is the promised bound

    let mut w = initial_guess(k, z);
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let ew = w.exp();
        let f = w * ew - z;
        residual = f.norm();
        if residual <= accept {
            return Ok(w);
        }
        // Halley: w <- w - f / (e^w (w+1) - (w+2) f / (2 (w+1)))
        let w1 = w + 1.0;
        let denom = ew * w1 - (w + 2.0) * f / (2.0 * w1);
        if !denom.is_finite() || denom.norm() == 0.0 {
            // right on top of the branch point; nudge off it
            w += Complex64::new(1e-8, 1e-8);
            continue;
        }
        w -= f / denom;
    }

    if residual <= contract {
        return Ok(w);
    }
    if k.abs() >= 2 && (z - Complex64::new(BRANCH_POINT, 0.0)).norm() <= 1e-12 {
        return Err(DdeError::BranchPointSingularity { k });
    }
    Err(DdeError::NoConvergence {
        what: "lambert_w Halley iteration",
        iterations: MAX_ITERATIONS,
    })
}

fn initial_guess(k: i32, z: Complex64) -> Complex64 {
    let from_branch_point = z - Complex64::new(BRANCH_POINT, 0.0);

    // sqrt expansion about -1/e for the two branches that meet there
    if from_branch_point.norm() < 0.3 {
        let p = ((z * E + 1.0) * 2.0).sqrt();
        if k == 0 {
            return Complex64::new(-1.0, 0.0) + p - p * p / 3.0 + p * p * p * (11.0 / 72.0);
        }
        if k == -1 && z.im == 0.0 && z.re < BRANCH_POINT {
            // on the real axis below the branch point the -p sheet applies
            return Complex64::new(-1.0, 0.0) - p - p * p / 3.0 - p * p * p * (11.0 / 72.0);
        }
    }

    if k == 0 {
        let on_cut = z.im == 0.0 && z.re < BRANCH_POINT;
        if z.norm() <= 2.0 && !on_cut {
            // [2/2] Pade of W(z)/z about 0
            let num = 1.0 + z * 1.9 + z * z * (17.0 / 60.0);
            let den = 1.0 + z * 2.9 + z * z * (101.0 / 60.0);
            return z * num / den;
        }
    } else if k == -1 && z.im == 0.0 && z.re < 0.0 && z.re >= BRANCH_POINT {
        // W_{-1} is real on [-1/e, 0); seed from ln(-z)
        return Complex64::new((-z.re).ln(), 0.0);
    }

    // asymptotic seed:  L - ln L  with  L = ln z + 2 pi i k
    let l = z.ln() + Complex64::new(0.0, 2.0 * PI * k as f64);
    l - l.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(k: i32, re: f64, im: f64) -> Complex64 {
        lambert_w(BranchIndex::new(k).unwrap(), Complex64::new(re, im)).unwrap()
    }

    fn assert_close(got: Complex64, want: Complex64, tol: f64) {
        assert!(
            (got - want).norm() <= tol,
            "got {got}, want {want} (|diff| = {:e})",
            (got - want).norm()
        );
    }

    #[test]
    fn principal_branch_anchors() {
        assert_eq!(w(0, 0.0, 0.0), Complex64::new(0.0, 0.0));
        assert_close(w(0, E, 0.0), Complex64::new(1.0, 0.0), 1e-13);
        // W_0(-pi/2) = i pi/2
        assert_close(
            w(0, -PI / 2.0, 0.0),
            Complex64::new(0.0, PI / 2.0),
            1e-12,
        );
        // omega constant W_0(1)
        assert_close(w(0, 1.0, 0.0), Complex64::new(0.567_143_290_409_783_873, 0.0), 1e-13);
    }

    #[test]
    fn secondary_branches_at_minus_one() {
        // reference values for W_k(-1)
        assert_close(
            w(-1, -1.0, 0.0),
            Complex64::new(-0.318_131_505_204_764_135_3, -1.337_235_701_430_689_408_9),
            1e-12,
        );
        assert_close(
            w(0, -1.0, 0.0),
            Complex64::new(-0.318_131_505_204_764_135_3, 1.337_235_701_430_689_408_9),
            1e-12,
        );
        assert_close(
            w(1, -1.0, 0.0),
            Complex64::new(-2.062_277_729_598_283_885, 7.588_631_178_472_512_623),
            1e-12,
        );
        assert_close(
            w(2, -1.0, 0.0),
            Complex64::new(-2.653_191_974_038_697_287, 13.949_208_334_533_214_455),
            1e-11,
        );
    }

    #[test]
    fn real_branches_between_branch_point_and_zero() {
        // both real branches exist on (-1/e, 0)
        for &x in &[-0.05, -0.2, -0.3, -0.36] {
            let w0 = w(0, x, 0.0);
            let wm1 = w(-1, x, 0.0);
            assert!(w0.im.abs() < 1e-12, "W0({x}) should be real, got {w0}");
            assert!(wm1.im.abs() < 1e-12, "W-1({x}) should be real, got {wm1}");
            assert!(w0.re >= -1.0 - 1e-12);
            assert!(wm1.re <= -1.0 + 1e-12);
        }
    }

    #[test]
    fn defining_identity_over_branches() {
        let moduli = [1e-3, 0.05, 0.2, 0.36, 0.5, 1.0, 3.0, 10.0, 1e3];
        for k in -6i32..=6 {
            let branch = BranchIndex::new(k).unwrap();
            for &m in &moduli {
                for j in 0..12 {
                    let theta = 2.0 * PI * (j as f64 + 0.31) / 12.0;
                    let z = Complex64::from_polar(m, theta);
                    if k != 0 && z.norm() == 0.0 {
                        continue;
                    }
                    let val = lambert_w(branch, z).unwrap();
                    let residual = (val * val.exp() - z).norm();
                    assert!(
                        residual <= 1e-12 * z.norm().max(1.0),
                        "k={k}, z={z}: residual {residual:e}"
                    );
                }
            }
        }
    }

    #[test]
    fn branch_point_value_on_adjacent_branches() {
        let bp = Complex64::new(BRANCH_POINT, 0.0);
        let w0 = lambert_w(BranchIndex::PRINCIPAL, bp).unwrap();
        assert!((w0 - Complex64::new(-1.0, 0.0)).norm() < 1e-7);
        let wm1 = lambert_w(BranchIndex::new(-1).unwrap(), bp).unwrap();
        assert!((wm1 - Complex64::new(-1.0, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn branch_index_cap() {
        assert!(BranchIndex::new(64).is_ok());
        assert!(BranchIndex::new(-64).is_ok());
        assert!(BranchIndex::new(65).is_err());
        assert!(BranchIndex::new(-65).is_err());
    }

    #[test]
    fn zero_rejected_off_principal_branch() {
        let err = lambert_w(BranchIndex::new(3).unwrap(), Complex64::new(0.0, 0.0));
        assert!(matches!(err, Err(DdeError::InvalidInput(_))));
    }

    #[test]
    fn imaginary_part_increases_with_branch_on_the_cut() {
        for &x in &[-0.5, -1.0, -4.0, -50.0] {
            let mut prev = f64::NEG_INFINITY;
            for k in -5i32..=5 {
                let val = w(k, x, 0.0);
                assert!(
                    val.im > prev,
                    "Im W_k({x}) not increasing at k={k}: {} <= {prev}",
                    val.im
                );
                prev = val.im;
            }
        }
    }
}
