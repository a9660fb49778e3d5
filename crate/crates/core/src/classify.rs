//! Stability verdicts, characteristic roots for the constant-coefficient
//! case, and Fourier-transformability classification.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::RangeInclusive;

use crate::error::{DdeError, Result};
use crate::params::{classify_regime, DdeParams, Regime};
use crate::specfn::{lambert_w, BranchIndex};

/// Stability of the zero solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityStatus {
    GloballyAsymptoticallyStable,
    Unstable,
    /// No stability claim is available; only the trivial solution is certain
    /// (the advanced case `a = 0`, `tau < 0`).
    TrivialOnly,
}

impl StabilityStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            StabilityStatus::GloballyAsymptoticallyStable => "globally_asymptotically_stable",
            StabilityStatus::Unstable => "unstable",
            StabilityStatus::TrivialOnly => "trivial_only",
        }
    }
}

/// Regime, stability flag, stability-window boundary, and the dominant
/// characteristic root where one exists.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub regime: Regime,
    pub status: StabilityStatus,
    /// `-pi / (2 tau)` when `a = 0` and `tau > 0`.
    pub boundary: Option<f64>,
    /// `lambda_0` when the regime is the constant-coefficient one.
    pub dominant_root: Option<Complex64>,
}

/// The four-case stability table:
/// `a > 0` stable; `a = 0` stable iff `b` in `(-pi/(2 tau), 0)` (for
/// `tau = 0`: iff `b < 0`); `a < 0` unstable.
pub fn stability_verdict(p: &DdeParams) -> StabilityVerdict {
    let regime = classify_regime(p);
    let (a, b, tau) = (p.a(), p.b(), p.tau());

    if a > 0.0 {
        return StabilityVerdict {
            regime,
            status: StabilityStatus::GloballyAsymptoticallyStable,
            boundary: None,
            dominant_root: None,
        };
    }
    if a < 0.0 {
        return StabilityVerdict {
            regime,
            status: StabilityStatus::Unstable,
            boundary: None,
            dominant_root: None,
        };
    }

    // a = 0
    if tau == 0.0 {
        // X' = b X: stable iff b < 0
        return StabilityVerdict {
            regime,
            status: if b < 0.0 {
                StabilityStatus::GloballyAsymptoticallyStable
            } else {
                StabilityStatus::Unstable
            },
            boundary: None,
            dominant_root: None,
        };
    }

    // lambda_0 = W_0(b tau) / tau solves lambda = b e^{-lambda tau} for
    // either delay sign; b = 0 leaves only the constant mode lambda = 0
    let dominant_root = Some(if b == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        lambert_w(BranchIndex::PRINCIPAL, Complex64::new(b * tau, 0.0))
            .map(|w| w / tau)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    });

    if tau < 0.0 {
        // advanced equation: no stability claim
        return StabilityVerdict {
            regime,
            status: StabilityStatus::TrivialOnly,
            boundary: None,
            dominant_root,
        };
    }

    let boundary = -PI / (2.0 * tau);
    let stable = b > boundary && b < 0.0;
    StabilityVerdict {
        regime,
        status: if stable {
            StabilityStatus::GloballyAsymptoticallyStable
        } else {
            StabilityStatus::Unstable
        },
        boundary: Some(boundary),
        dominant_root,
    }
}

/// One characteristic root `lambda_k = W_k(b tau) / tau` with its branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicRoot {
    pub branch: i32,
    pub lambda: Complex64,
}

/// Characteristic roots of `X' = b X(t - tau)` over the requested branches,
/// sorted by descending real part.
pub fn characteristic_roots(
    b: f64,
    tau: f64,
    branches: RangeInclusive<i32>,
) -> Result<Vec<CharacteristicRoot>> {
    if tau.is_nan() || tau <= 0.0 {
        return Err(DdeError::InvalidDelay { tau });
    }
    if b == 0.0 {
        return Err(DdeError::InvalidInput(
            "characteristic roots need b != 0 (b = 0 leaves only lambda = 0)".into(),
        ));
    }
    let z = Complex64::new(b * tau, 0.0);
    let mut roots = Vec::new();
    for k in branches {
        let w = lambert_w(BranchIndex::new(k)?, z)?;
        roots.push(CharacteristicRoot { branch: k, lambda: w / tau });
    }
    roots.sort_by(|x, y| {
        y.lambda
            .re
            .partial_cmp(&x.lambda.re)
            .unwrap()
            .then(x.lambda.im.abs().partial_cmp(&y.lambda.im.abs()).unwrap())
            .then(x.branch.cmp(&y.branch))
    });
    Ok(roots)
}

/// Why a parameter set is (or is not) Fourier transformable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformabilityReason {
    /// `a > 0`: Gaussian decay in both time directions.
    GaussianDecay,
    /// `a < 0`: solutions grow like `exp(-a t^2 / 2)`.
    DivergentGrowth,
    /// `a = 0`, `tau != 0`: exponential Lambert modes, not absolutely
    /// integrable.
    LambertModes,
    /// `a = 0`, `tau = 0`: plain exponential.
    ExponentialGrowth,
}

impl TransformabilityReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            TransformabilityReason::GaussianDecay => "gaussian_decay",
            TransformabilityReason::DivergentGrowth => "divergent_growth",
            TransformabilityReason::LambertModes => "lambert_modes",
            TransformabilityReason::ExponentialGrowth => "exponential_growth",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transformability {
    pub transformable: bool,
    pub reason: TransformabilityReason,
}

/// Fourier transformability over the whole real line: true iff `a > 0`.
pub fn fourier_transformable(p: &DdeParams) -> Transformability {
    if p.a() > 0.0 {
        Transformability { transformable: true, reason: TransformabilityReason::GaussianDecay }
    } else if p.a() < 0.0 {
        Transformability { transformable: false, reason: TransformabilityReason::DivergentGrowth }
    } else if p.tau() != 0.0 {
        Transformability { transformable: false, reason: TransformabilityReason::LambertModes }
    } else {
        Transformability {
            transformable: false,
            reason: TransformabilityReason::ExponentialGrowth,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, b: f64, tau: f64) -> DdeParams {
        DdeParams::new(a, b, tau, 1.0).unwrap()
    }

    #[test]
    fn positive_a_is_always_stable() {
        let v = stability_verdict(&params(0.2, 100.0, 7.0));
        assert_eq!(v.status, StabilityStatus::GloballyAsymptoticallyStable);
        assert_eq!(v.regime, Regime::SeriesRegime);
        assert!(v.boundary.is_none());
        assert!(v.dominant_root.is_none());
    }

    #[test]
    fn hayes_window() {
        let v = stability_verdict(&params(0.0, -0.5, 2.0));
        assert_eq!(v.status, StabilityStatus::GloballyAsymptoticallyStable);
        let boundary = v.boundary.unwrap();
        assert!((boundary + PI / 4.0).abs() < 1e-15);
        let root = v.dominant_root.unwrap();
        assert!(root.re < 0.0, "dominant root {root} should decay");

        let v = stability_verdict(&params(0.0, 0.1, 2.0));
        assert_eq!(v.status, StabilityStatus::Unstable);
        let root = v.dominant_root.unwrap();
        assert!(root.re > 0.0);

        // below the window: oscillatory instability
        let v = stability_verdict(&params(0.0, -1.0, 2.0));
        assert_eq!(v.status, StabilityStatus::Unstable);
    }

    #[test]
    fn negative_a_is_unstable() {
        let v = stability_verdict(&params(-0.1, 1.0, 2.0));
        assert_eq!(v.status, StabilityStatus::Unstable);
        assert_eq!(v.regime, Regime::Divergent);
    }

    #[test]
    fn no_delay_exponential_criterion() {
        assert_eq!(
            stability_verdict(&params(0.0, -1.0, 0.0)).status,
            StabilityStatus::GloballyAsymptoticallyStable
        );
        assert_eq!(stability_verdict(&params(0.0, 0.0, 0.0)).status, StabilityStatus::Unstable);
        assert_eq!(stability_verdict(&params(0.0, 1.0, 0.0)).status, StabilityStatus::Unstable);
    }

    #[test]
    fn advanced_case_makes_no_claim() {
        let v = stability_verdict(&params(0.0, -0.5, -2.0));
        assert_eq!(v.status, StabilityStatus::TrivialOnly);
        assert!(v.boundary.is_none());
        assert!(v.dominant_root.is_some());
    }

    #[test]
    fn marginal_root_at_the_window_edge() {
        // b tau = -pi/2: lambda_0 = i pi / (2 tau), purely imaginary
        let roots = characteristic_roots(-PI / 2.0, 1.0, 0..=0).unwrap();
        let lambda = roots[0].lambda;
        assert!(lambda.re.abs() <= 1e-10, "Re lambda = {}", lambda.re);
        assert!((lambda.im - PI / 2.0).abs() <= 1e-10);
    }

    #[test]
    fn omega_constant_root() {
        let roots = characteristic_roots(1.0, 1.0, 0..=0).unwrap();
        let lambda = roots[0].lambda;
        assert!((lambda.re - 0.567_143_290_409_783_873).abs() < 1e-12);
        assert!(lambda.im.abs() < 1e-12);
    }

    #[test]
    fn roots_satisfy_the_characteristic_equation() {
        for (b, tau) in [(1.0, 1.0), (-0.5, 2.0), (-3.0, 0.7), (2.5, 4.0)] {
            let roots = characteristic_roots(b, tau, -5..=5).unwrap();
            assert_eq!(roots.len(), 11);
            for root in &roots {
                let lambda = root.lambda;
                let residual = (lambda - b * (-lambda * tau).exp()).norm();
                assert!(
                    residual <= 1e-10 * b.abs().max(1.0),
                    "b={b}, tau={tau}, k={}: residual {residual:e}",
                    root.branch
                );
            }
            // sorted by descending real part, principal branch on top
            for pair in roots.windows(2) {
                assert!(pair[0].lambda.re >= pair[1].lambda.re);
            }
            assert!(roots[0].branch.abs() <= 1);
        }
    }

    #[test]
    fn root_input_validation() {
        assert!(matches!(
            characteristic_roots(1.0, 0.0, 0..=0),
            Err(DdeError::InvalidDelay { .. })
        ));
        assert!(matches!(
            characteristic_roots(1.0, -1.0, 0..=0),
            Err(DdeError::InvalidDelay { .. })
        ));
        assert!(matches!(
            characteristic_roots(0.0, 1.0, 0..=0),
            Err(DdeError::InvalidInput(_))
        ));
    }

    #[test]
    fn transformability_cases() {
        let t = fourier_transformable(&params(0.15, 6.0, 3.0));
        assert!(t.transformable);
        assert_eq!(t.reason, TransformabilityReason::GaussianDecay);

        let t = fourier_transformable(&params(0.0, 1.0, 3.0));
        assert!(!t.transformable);
        assert_eq!(t.reason, TransformabilityReason::LambertModes);

        let t = fourier_transformable(&params(-1.0, 1.0, 3.0));
        assert!(!t.transformable);
        assert_eq!(t.reason, TransformabilityReason::DivergentGrowth);

        let t = fourier_transformable(&params(0.0, 1.0, 0.0));
        assert!(!t.transformable);
        assert_eq!(t.reason, TransformabilityReason::ExponentialGrowth);
    }
}
