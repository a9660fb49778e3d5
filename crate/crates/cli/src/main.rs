//! Command-line front end for the delay-equation toolkit.
//!
//! Exit codes: 0 success, 2 invalid arguments or parameters, 3 numerical
//! failure (reported as JSON on stderr).

mod output;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gaussdde::classify::{fourier_transformable, stability_verdict};
use gaussdde::classify::characteristic_roots;
use gaussdde::envelope::{eval_e_grid, eval_g_grid, max_estimate};
use gaussdde::error::DdeError;
use gaussdde::params::{classify_regime, DdeParams, Regime};
use gaussdde::quadrature::{eval_integral_grid, QuadratureSpec};
use gaussdde::series::{eval_series_grid, TruncationPolicy};
use gaussdde::stepper::{integrate_dde_dense, InitialFunction, StepperConfig};
use gaussdde::trace::EvalGrid;

use output::{render_csv, render_svg, write_output, Column, Curve};
use report::{
    ComplexBody, CompareReport, DeviationStats, DeviationsBody, EnvelopeBody, EnvelopeReport,
    ErrorBody, ErrorReport, RootBody, RootsReport, StabilityReport, VerdictBody,
};

#[derive(Parser)]
#[command(
    name = "gaussdde",
    version,
    about = "Evaluate and analyze X'(t) + a t X(t) = b X(t - tau) via its Gaussian series, \
             Fourier integral, and method-of-steps integration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the series solution on a grid (optionally with G/E columns)
    Eval(EvalArgs),
    /// Evaluate series, integral, and steps on one grid and report deviations
    Compare(CompareArgs),
    /// Enclosing curve, envelope, peak index, and maximum estimate
    Envelope(EnvelopeArgs),
    /// Stability verdict as JSON
    Stability(StabilityArgs),
    /// Characteristic roots lambda_k = W_k(b tau)/tau for a = 0
    Roots(RootsArgs),
    /// Repeat eval over a delay list into one multi-column CSV/SVG
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ParamArgs {
    /// Coefficient of the time-proportional drift term a t X(t)
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    /// Coefficient of the delayed feedback b X(t - tau)
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    /// Delay (the series routes accept either sign)
    #[arg(long, allow_hyphen_values = true)]
    tau: f64,
    /// Solution scale
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    c: f64,
}

impl ParamArgs {
    fn build(&self) -> Result<DdeParams, CliError> {
        Ok(DdeParams::new(self.a, self.b, self.tau, self.c)?)
    }
}

#[derive(Args)]
struct GridArgs {
    /// Grid start (defaults to the figure window)
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<f64>,
    /// Grid end (defaults to max(60, 10 |tau|))
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<f64>,
    /// Number of grid nodes
    #[arg(long, default_value_t = 4000)]
    points: usize,
}

impl GridArgs {
    fn build(&self, tau: f64, forward_only: bool) -> Result<EvalGrid, CliError> {
        let reach = (10.0 * tau.abs()).max(60.0);
        let (default_min, default_max) = if tau < 0.0 {
            (-reach, 10.0)
        } else if forward_only {
            (0.0, reach)
        } else {
            (-10.0, reach)
        };
        Ok(EvalGrid::new(
            self.t_min.unwrap_or(default_min),
            self.t_max.unwrap_or(default_max),
            self.points,
        )?)
    }
}

#[derive(ValueEnum, Clone, Copy)]
enum TruncationModeArg {
    Adaptive,
    Fixed,
}

#[derive(Args)]
struct TruncationArgs {
    /// Series truncation mode
    #[arg(long, value_enum, default_value_t = TruncationModeArg::Adaptive)]
    truncation: TruncationModeArg,
    /// Hard cap on the series index
    #[arg(long, default_value_t = 500)]
    n_max: u32,
    /// Adaptive tail threshold relative to the peak coefficient
    #[arg(long, default_value_t = 1e-15)]
    epsilon: f64,
}

impl TruncationArgs {
    fn build(&self) -> Result<TruncationPolicy, CliError> {
        Ok(match self.truncation {
            TruncationModeArg::Fixed => TruncationPolicy::fixed(self.n_max)?,
            TruncationModeArg::Adaptive => {
                TruncationPolicy::adaptive_capped(self.epsilon, self.n_max)?
            }
        })
    }
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    truncation: TruncationArgs,
    /// Add the enclosing-curve column g_env
    #[arg(long)]
    with_g: bool,
    /// Add the envelope columns e_env_plus / e_env_minus (needs b != 0)
    #[arg(long)]
    with_e: bool,
    /// CSV output path (`-` for stdout)
    #[arg(long)]
    csv: Option<String>,
    /// SVG output path (`-` for stdout)
    #[arg(long)]
    svg: Option<String>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    truncation: TruncationArgs,
    /// Absolute tolerance for the Fourier-integral route (raise it for
    /// large |b/(a tau)|, where the integrand scale grows like e^|r|)
    #[arg(long, default_value_t = 1e-8)]
    quad_tol: f64,
    /// Requested stepper step; snapped to tau/m with integer m >= 10
    /// (default tau/1500)
    #[arg(long)]
    h: Option<f64>,
    /// Initial function: `series`, `const:<value>`, or `table:<path>`
    #[arg(long, default_value = "series")]
    seed_phi: String,
    /// CSV output path (`-` for stdout)
    #[arg(long)]
    csv: Option<String>,
    /// JSON deviation report path (`-` for stdout)
    #[arg(long)]
    json: Option<String>,
    /// SVG output path (`-` for stdout)
    #[arg(long)]
    svg: Option<String>,
}

#[derive(Args)]
struct EnvelopeArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    truncation: TruncationArgs,
    /// CSV output path (`-` for stdout)
    #[arg(long)]
    csv: Option<String>,
    /// JSON envelope report path (`-` for stdout)
    #[arg(long)]
    json: Option<String>,
    /// SVG output path (`-` for stdout)
    #[arg(long)]
    svg: Option<String>,
}

#[derive(Args)]
struct StabilityArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// JSON report path (default `-`, stdout)
    #[arg(long, default_value = "-")]
    json: String,
}

#[derive(Args)]
struct RootsArgs {
    /// Coefficient of the delayed feedback (must be nonzero)
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    /// Delay (must be positive)
    #[arg(long, allow_hyphen_values = true)]
    tau: f64,
    /// Lowest branch index
    #[arg(long, default_value_t = -5, allow_hyphen_values = true)]
    k_min: i32,
    /// Highest branch index
    #[arg(long, default_value_t = 5, allow_hyphen_values = true)]
    k_max: i32,
    /// JSON report path (default `-`, stdout)
    #[arg(long, default_value = "-")]
    json: String,
}

#[derive(Args)]
struct SweepArgs {
    /// Coefficient of the time-proportional drift term
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    /// Coefficient of the delayed feedback
    #[arg(long, allow_hyphen_values = true)]
    b: f64,
    /// Comma-separated delay list, e.g. 3,5,6,8,12,20,30,40,50
    #[arg(long)]
    tau_list: String,
    /// Solution scale
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    c: f64,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    truncation: TruncationArgs,
    /// CSV output path (`-` for stdout)
    #[arg(long)]
    csv: Option<String>,
    /// SVG output path (`-` for stdout)
    #[arg(long)]
    svg: Option<String>,
}

enum CliError {
    Usage(String),
    Numerical(DdeError),
    Io(std::io::Error),
}

impl From<DdeError> for CliError {
    fn from(e: DdeError) -> Self {
        match e {
            DdeError::NonFinite { .. }
            | DdeError::DegenerateParams(_)
            | DdeError::InvalidInput(_)
            | DdeError::InvalidDelay { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn error_kind(e: &DdeError) -> &'static str {
    match e {
        DdeError::NonFinite { .. } => "non_finite",
        DdeError::DegenerateParams(_) => "degenerate_params",
        DdeError::Overflow { .. } => "overflow",
        DdeError::ToleranceNotMet { .. } => "tolerance_not_met",
        DdeError::NoConvergence { .. } => "no_convergence",
        DdeError::BranchPointSingularity { .. } => "branch_point_singularity",
        DdeError::InvalidDelay { .. } => "invalid_delay",
        DdeError::DivergenceDetected { .. } => "divergence_detected",
        DdeError::OutOfHistory { .. } => "out_of_history",
        DdeError::InvalidInput(_) => "invalid_input",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(args) => run_eval(args),
        Command::Compare(args) => run_compare(args),
        Command::Envelope(args) => run_envelope(args),
        Command::Stability(args) => run_stability(args),
        Command::Roots(args) => run_roots(args),
        Command::Sweep(args) => run_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(e)) => {
            let body = ErrorReport {
                error: ErrorBody { kind: error_kind(&e), message: e.to_string() },
            };
            eprintln!("{}", serde_json::to_string(&body).expect("error report serializes"));
            ExitCode::from(3)
        }
        Err(CliError::Io(e)) => {
            let body = ErrorReport {
                error: ErrorBody { kind: "io", message: e.to_string() },
            };
            eprintln!("{}", serde_json::to_string(&body).expect("error report serializes"));
            ExitCode::from(3)
        }
    }
}

fn require_series_regime(p: &DdeParams) -> Result<(), CliError> {
    match classify_regime(p) {
        Regime::SeriesRegime => Ok(()),
        other => Err(CliError::Usage(format!(
            "the series solution needs a > 0 and tau != 0, but (a, b, tau) = ({}, {}, {}) \
             falls in the {} regime; `stability` and `roots` cover it instead",
            p.a(),
            p.b(),
            p.tau(),
            other.as_str()
        ))),
    }
}

fn require_some_output(paths: &[&Option<String>]) -> Result<(), CliError> {
    if paths.iter().all(|p| p.is_none()) {
        return Err(CliError::Usage(
            "no output requested; pass at least one of --csv/--json/--svg".into(),
        ));
    }
    Ok(())
}

fn run_eval(args: EvalArgs) -> Result<(), CliError> {
    let p = args.params.build()?;
    require_series_regime(&p)?;
    require_some_output(&[&args.csv, &args.svg])?;
    if args.with_e && p.b() == 0.0 {
        return Err(CliError::Usage(
            "--with-e excludes b = 0 (single Gaussian, no peak sequence)".into(),
        ));
    }
    let pol = args.truncation.build()?;
    let grid = args.grid.build(p.tau(), false)?;

    let series = eval_series_grid(&p, &grid, &pol)?;
    let mut columns = vec![Column { name: "x_series".into(), values: series.values.clone() }];
    let mut curves = vec![Curve {
        label: "X(t)".into(),
        color: "blue",
        dashed: false,
        values: series.values,
    }];
    if args.with_g {
        let g = eval_g_grid(&p, &grid, &pol)?;
        columns.push(Column { name: "g_env".into(), values: g.values.clone() });
        curves.push(Curve { label: "G(t)".into(), color: "orange", dashed: false, values: g.values });
    }
    if args.with_e {
        let (plus, minus) = eval_e_grid(&p, &grid)?;
        columns.push(Column { name: "e_env_plus".into(), values: plus.values.clone() });
        columns.push(Column { name: "e_env_minus".into(), values: minus.values.clone() });
        curves.push(Curve { label: "E(t)".into(), color: "red", dashed: false, values: plus.values });
        curves.push(Curve { label: "-E(t)".into(), color: "red", dashed: true, values: minus.values });
    }

    if let Some(path) = &args.csv {
        write_output(path, &render_csv(&grid, &columns))?;
    }
    if let Some(path) = &args.svg {
        write_output(path, &render_svg(&grid, &curves))?;
    }
    Ok(())
}

fn parse_phi(spec: &str) -> Result<InitialFunction, CliError> {
    if spec == "series" {
        return Ok(InitialFunction::FromSeries);
    }
    if let Some(value) = spec.strip_prefix("const:") {
        let v: f64 = value
            .parse()
            .map_err(|_| CliError::Usage(format!("bad constant in --seed-phi: {value:?}")))?;
        return Ok(InitialFunction::Constant(v));
    }
    if let Some(path) = spec.strip_prefix("table:") {
        let text = std::fs::read_to_string(path)?;
        return Ok(InitialFunction::from_table_text(&text)?);
    }
    Err(CliError::Usage(format!(
        "--seed-phi takes `series`, `const:<value>`, or `table:<path>`, got {spec:?}"
    )))
}

fn run_compare(args: CompareArgs) -> Result<(), CliError> {
    let p = args.params.build()?;
    require_series_regime(&p)?;
    if p.tau() < 0.0 {
        return Err(CliError::Usage(
            "compare includes the method of steps, which needs tau > 0".into(),
        ));
    }
    require_some_output(&[&args.csv, &args.json, &args.svg])?;
    let pol = args.truncation.build()?;
    let grid = args.grid.build(p.tau(), true)?;
    if grid.t_min() < -p.tau() {
        return Err(CliError::Usage(format!(
            "compare grid may not start before -tau = {} (steps history begins there)",
            -p.tau()
        )));
    }

    let series = eval_series_grid(&p, &grid, &pol)?;
    let spec = QuadratureSpec::for_params(&p, args.quad_tol)?;
    let integral = eval_integral_grid(&p, &grid, &spec)?;

    let phi = parse_phi(&args.seed_phi)?;
    let h = args.h.unwrap_or(p.tau() / 1500.0);
    let cfg = StepperConfig::new(h, grid.t_max().max(f64::MIN_POSITIVE))?;
    let integration = integrate_dde_dense(&p, &phi, &cfg)?;
    let steps: Vec<f64> = grid
        .nodes()
        .map(|t| integration.sample(t))
        .collect::<Result<_, _>>()?;

    let scale = series.max_abs().max(f64::MIN_POSITIVE);
    let body = CompareReport {
        deviations: DeviationsBody {
            scale,
            integral: DeviationStats::between(&series.values, &integral.values, scale),
            steps: DeviationStats::between(&series.values, &steps, scale),
        },
    };

    if let Some(path) = &args.json {
        let mut text = serde_json::to_string_pretty(&body).expect("report serializes");
        text.push('\n');
        write_output(path, &text)?;
    }
    if let Some(path) = &args.csv {
        let columns = [
            Column { name: "x_series".into(), values: series.values.clone() },
            Column { name: "x_integral".into(), values: integral.values.clone() },
            Column { name: "x_steps".into(), values: steps.clone() },
        ];
        write_output(path, &render_csv(&grid, &columns))?;
    }
    if let Some(path) = &args.svg {
        let curves = [
            Curve { label: "series".into(), color: "blue", dashed: false, values: series.values },
            Curve { label: "integral".into(), color: "green", dashed: false, values: integral.values },
            Curve { label: "steps".into(), color: "purple", dashed: true, values: steps },
        ];
        write_output(path, &render_svg(&grid, &curves))?;
    }
    Ok(())
}

fn run_envelope(args: EnvelopeArgs) -> Result<(), CliError> {
    let p = args.params.build()?;
    require_series_regime(&p)?;
    require_some_output(&[&args.csv, &args.json, &args.svg])?;
    let pol = args.truncation.build()?;
    let grid = args.grid.build(p.tau(), false)?;

    let estimate = max_estimate(&p, &pol)?;
    let series = eval_series_grid(&p, &grid, &pol)?;
    let g = eval_g_grid(&p, &grid, &pol)?;

    let mut columns = vec![
        Column { name: "x_series".into(), values: series.values.clone() },
        Column { name: "g_env".into(), values: g.values.clone() },
    ];
    let mut curves = vec![
        Curve { label: "X(t)".into(), color: "blue", dashed: false, values: series.values },
        Curve { label: "G(t)".into(), color: "orange", dashed: false, values: g.values },
    ];
    if p.b() != 0.0 {
        let (plus, minus) = eval_e_grid(&p, &grid)?;
        columns.push(Column { name: "e_env_plus".into(), values: plus.values.clone() });
        columns.push(Column { name: "e_env_minus".into(), values: minus.values.clone() });
        curves.push(Curve { label: "E(t)".into(), color: "red", dashed: false, values: plus.values });
        curves.push(Curve { label: "-E(t)".into(), color: "red", dashed: true, values: minus.values });
    }

    if let Some(path) = &args.json {
        let body = EnvelopeReport {
            envelope: EnvelopeBody {
                n_star: estimate.peak.indices.clone(),
                peak_log_amp: estimate.peak.peak_log_amp,
                t_star: estimate.t_star,
                amp: estimate.amp,
                ambiguous: estimate.ambiguous,
            },
        };
        let mut text = serde_json::to_string_pretty(&body).expect("report serializes");
        text.push('\n');
        write_output(path, &text)?;
    }
    if let Some(path) = &args.csv {
        write_output(path, &render_csv(&grid, &columns))?;
    }
    if let Some(path) = &args.svg {
        write_output(path, &render_svg(&grid, &curves))?;
    }
    Ok(())
}

fn run_stability(args: StabilityArgs) -> Result<(), CliError> {
    let p = args.params.build()?;
    let verdict = stability_verdict(&p);
    let transform = fourier_transformable(&p);
    let body = StabilityReport {
        verdict: VerdictBody {
            regime: verdict.regime.as_str(),
            status: verdict.status.as_str(),
            boundary: verdict.boundary,
            dominant_root: verdict.dominant_root.map(|w| ComplexBody { re: w.re, im: w.im }),
            fourier_transformable: transform.transformable,
            transformability_reason: transform.reason.as_str(),
        },
    };
    let mut text = serde_json::to_string_pretty(&body).expect("report serializes");
    text.push('\n');
    write_output(&args.json, &text)?;
    Ok(())
}

fn run_roots(args: RootsArgs) -> Result<(), CliError> {
    if args.k_min > args.k_max {
        return Err(CliError::Usage(format!(
            "branch range is empty: k_min = {} > k_max = {}",
            args.k_min, args.k_max
        )));
    }
    let roots = characteristic_roots(args.b, args.tau, args.k_min..=args.k_max)?;
    let body = RootsReport {
        roots: roots
            .iter()
            .map(|root| {
                let lambda = root.lambda;
                let residual = (lambda - (-lambda * args.tau).exp() * args.b).norm();
                RootBody { k: root.branch, re: lambda.re, im: lambda.im, residual }
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&body).expect("report serializes");
    text.push('\n');
    write_output(&args.json, &text)?;
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    require_some_output(&[&args.csv, &args.svg])?;
    let mut taus = Vec::new();
    for field in args.tau_list.split(',') {
        let tau: f64 = field
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad delay in --tau-list: {field:?}")))?;
        taus.push(tau);
    }
    if taus.is_empty() {
        return Err(CliError::Usage("--tau-list is empty".into()));
    }
    let pol = args.truncation.build()?;

    let reach = taus.iter().fold(60.0f64, |m, tau| m.max(10.0 * tau.abs()));
    let any_negative = taus.iter().any(|&tau| tau < 0.0);
    let any_positive = taus.iter().any(|&tau| tau > 0.0);
    let default_min = if any_negative { -reach } else { -10.0 };
    let default_max = if any_positive { reach } else { 10.0 };
    let grid = EvalGrid::new(
        args.grid.t_min.unwrap_or(default_min),
        args.grid.t_max.unwrap_or(default_max),
        args.grid.points,
    )?;

    const PALETTE: [&str; 10] = [
        "blue", "orange", "red", "green", "purple", "brown", "magenta", "teal", "olive", "navy",
    ];
    let mut columns = Vec::new();
    let mut curves = Vec::new();
    for (i, &tau) in taus.iter().enumerate() {
        let p = DdeParams::new(args.a, args.b, tau, args.c)?;
        require_series_regime(&p)?;
        let trace = eval_series_grid(&p, &grid, &pol)?;
        columns.push(Column { name: format!("x_tau_{tau}"), values: trace.values.clone() });
        curves.push(Curve {
            label: format!("tau = {tau}"),
            color: PALETTE[i % PALETTE.len()],
            dashed: false,
            values: trace.values,
        });
    }

    if let Some(path) = &args.csv {
        write_output(path, &render_csv(&grid, &columns))?;
    }
    if let Some(path) = &args.svg {
        write_output(path, &render_svg(&grid, &curves))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use output::format_full;

    #[test]
    fn full_precision_round_trips() {
        for v in [0.0, 1.0, -14.698106326016689, 1.3041808783936323e52, 5e-324] {
            let parsed: f64 = format_full(v).parse().unwrap();
            assert_eq!(parsed.to_bits(), v.to_bits(), "{v:e}");
        }
    }

    #[test]
    fn phi_spec_parsing() {
        assert!(matches!(parse_phi("series"), Ok(InitialFunction::FromSeries)));
        assert!(matches!(parse_phi("const:2.5"), Ok(InitialFunction::Constant(v)) if v == 2.5));
        assert!(matches!(parse_phi("const:x"), Err(CliError::Usage(_))));
        assert!(matches!(parse_phi("nope"), Err(CliError::Usage(_))));
    }

    #[test]
    fn error_kinds_are_snake_case() {
        let e = DdeError::ToleranceNotMet { estimated: 1.0, tolerance: 0.5 };
        assert_eq!(error_kind(&e), "tolerance_not_met");
        let e = DdeError::DivergenceDetected { t: 1.0, limit: 1e300 };
        assert_eq!(error_kind(&e), "divergence_detected");
    }
}
