//! JSON report bodies (lowercase snake-case keys throughout).

use serde::Serialize;

#[derive(Serialize)]
pub struct ComplexBody {
    pub re: f64,
    pub im: f64,
}

#[derive(Serialize)]
pub struct StabilityReport {
    pub verdict: VerdictBody,
}

#[derive(Serialize)]
pub struct VerdictBody {
    pub regime: &'static str,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominant_root: Option<ComplexBody>,
    pub fourier_transformable: bool,
    pub transformability_reason: &'static str,
}

#[derive(Serialize)]
pub struct RootsReport {
    pub roots: Vec<RootBody>,
}

#[derive(Serialize)]
pub struct RootBody {
    pub k: i32,
    pub re: f64,
    pub im: f64,
    /// |lambda - b exp(-lambda tau)|
    pub residual: f64,
}

#[derive(Serialize)]
pub struct CompareReport {
    pub deviations: DeviationsBody,
}

#[derive(Serialize)]
pub struct DeviationsBody {
    /// max |series| over the grid; `max_rel` is relative to this.
    pub scale: f64,
    pub integral: DeviationStats,
    pub steps: DeviationStats,
}

#[derive(Serialize)]
pub struct DeviationStats {
    pub max_abs: f64,
    pub max_rel: f64,
    pub rms: f64,
}

impl DeviationStats {
    pub fn between(reference: &[f64], other: &[f64], scale: f64) -> Self {
        let mut max_abs = 0.0f64;
        let mut sum_sq = 0.0f64;
        for (x, y) in reference.iter().zip(other) {
            let d = (x - y).abs();
            max_abs = max_abs.max(d);
            sum_sq += d * d;
        }
        Self {
            max_abs,
            max_rel: max_abs / scale,
            rms: (sum_sq / reference.len() as f64).sqrt(),
        }
    }
}

#[derive(Serialize)]
pub struct EnvelopeReport {
    pub envelope: EnvelopeBody,
}

#[derive(Serialize)]
pub struct EnvelopeBody {
    pub n_star: Vec<u32>,
    pub peak_log_amp: f64,
    pub t_star: f64,
    pub amp: f64,
    pub ambiguous: bool,
}

#[derive(Serialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
}
