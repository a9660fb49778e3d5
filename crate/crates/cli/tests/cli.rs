//! End-to-end checks of the binary: exit codes, file formats, determinism,
//! and the report invariants.

use std::process::{Command, Output};

use gaussdde::series::{eval_series_grid, TruncationPolicy};
use gaussdde::trace::EvalGrid;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gaussdde"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|line| line.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn eval_writes_the_requested_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let out = run(&[
        "eval", "--a", "0.15", "--b", "6", "--tau", "3", "--c", "1", "--t-min", "-10", "--t-max",
        "60", "--points", "2000", "--csv", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.ends_with('\n'));
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, vec!["t", "x_series"]);
    assert_eq!(rows.len(), 2000);
}

#[test]
fn csv_round_trips_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let out = run(&[
        "eval", "--a", "0.15", "--b", "-6", "--tau", "8", "--t-min", "-10", "--t-max", "64",
        "--points", "333", "--csv", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let (_, rows) = parse_csv(&std::fs::read_to_string(&csv).unwrap());

    let p = gaussdde::params::DdeParams::new(0.15, -6.0, 8.0, 1.0).unwrap();
    let grid = EvalGrid::new(-10.0, 64.0, 333).unwrap();
    let trace = eval_series_grid(&p, &grid, &TruncationPolicy::default()).unwrap();
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0].to_bits(), grid.node(i).to_bits(), "t at row {i}");
        assert_eq!(row[1].to_bits(), trace.values[i].to_bits(), "x at row {i}");
    }
}

#[test]
fn identical_configuration_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args_for = |stem: &str| {
        let csv = dir.path().join(format!("{stem}.csv"));
        let svg = dir.path().join(format!("{stem}.svg"));
        (csv, svg)
    };
    let (csv1, svg1) = args_for("one");
    let (csv2, svg2) = args_for("two");
    for (csv, svg) in [(&csv1, &svg1), (&csv2, &svg2)] {
        let out = run(&[
            "eval", "--a", "0.15", "--b", "6", "--tau", "8", "--with-g", "--with-e", "--points",
            "700", "--csv", csv.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&csv1).unwrap(), std::fs::read(&csv2).unwrap());
    assert_eq!(std::fs::read(&svg1).unwrap(), std::fs::read(&svg2).unwrap());
}

#[test]
fn unsupported_regime_is_a_usage_error() {
    let out = run(&["eval", "--a", "-1", "--b", "1", "--tau", "2", "--csv", "-"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("divergent"), "stderr: {stderr}");
}

#[test]
fn missing_output_is_a_usage_error() {
    let out = run(&["eval", "--a", "0.15", "--b", "6", "--tau", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stability_report_matches_the_window() {
    let out = run(&["stability", "--a", "0", "--b", "-0.5", "--tau", "2", "--json", "-"]);
    assert!(out.status.success());
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let verdict = &body["verdict"];
    assert_eq!(verdict["status"], "globally_asymptotically_stable");
    assert_eq!(verdict["regime"], "hayes");
    let boundary = verdict["boundary"].as_f64().unwrap();
    assert!((boundary + std::f64::consts::PI / 4.0).abs() < 1e-12);
    assert_eq!(verdict["fourier_transformable"], serde_json::Value::Bool(false));
}

#[test]
fn roots_report_lists_requested_branches() {
    let out = run(&["roots", "--b", "1", "--tau", "1", "--k-min", "-3", "--k-max", "3"]);
    assert!(out.status.success());
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let roots = body["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 7);
    // principal root first (largest real part), omega constant
    assert_eq!(roots[0]["k"], 0);
    assert!((roots[0]["re"].as_f64().unwrap() - 0.567_143_290_409_784).abs() < 1e-12);
    for root in roots {
        assert!(root["residual"].as_f64().unwrap() <= 1e-10);
    }
}

#[test]
fn compare_deviation_report_is_rederivable_from_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cmp.csv");
    let out = run(&[
        "compare", "--a", "0.15", "--b", "6", "--tau", "3", "--t-max", "24", "--points", "400",
        "--csv", csv.to_str().unwrap(), "--json", "-",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let (header, rows) = parse_csv(&std::fs::read_to_string(&csv).unwrap());
    assert_eq!(header, vec!["t", "x_series", "x_integral", "x_steps"]);

    for (method, column) in [("integral", 2usize), ("steps", 3usize)] {
        let reported = body["deviations"][method]["max_abs"].as_f64().unwrap();
        let rederived = rows
            .iter()
            .map(|row| (row[1] - row[column]).abs())
            .fold(0.0f64, f64::max);
        assert_eq!(reported.to_bits(), rederived.to_bits(), "{method}");
    }

    let scale = body["deviations"]["scale"].as_f64().unwrap();
    assert!(body["deviations"]["integral"]["max_rel"].as_f64().unwrap() <= 1e-7);
    assert!(scale > 0.0);
}

#[test]
fn unreachable_tolerance_exits_3_with_error_json() {
    let out = run(&[
        "compare", "--a", "0.15", "--b", "6", "--tau", "3", "--quad-tol", "1e-30", "--json", "-",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let body: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(body["error"]["kind"], "tolerance_not_met");
    assert!(body["error"]["message"].as_str().unwrap().contains("tolerance"));
}

#[test]
fn sweep_columns_match_individual_evals() {
    let dir = tempfile::tempdir().unwrap();
    let sweep_csv = dir.path().join("sweep.csv");
    let out = run(&[
        "sweep", "--a", "0.15", "--b", "6", "--tau-list", "3,8,20", "--points", "600", "--csv",
        sweep_csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&std::fs::read_to_string(&sweep_csv).unwrap());
    assert_eq!(header, vec!["t", "x_tau_3", "x_tau_8", "x_tau_20"]);

    for (column, tau) in [(1usize, 3.0f64), (2, 8.0), (3, 20.0)] {
        let sweep_max = rows.iter().map(|row| row[column].abs()).fold(0.0f64, f64::max);
        let single = dir.path().join(format!("single_{column}.csv"));
        let out = run(&[
            "eval", "--a", "0.15", "--b", "6", "--tau", &tau.to_string(), "--t-min", "-10",
            "--t-max", "200", "--points", "600", "--csv", single.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let (_, single_rows) = parse_csv(&std::fs::read_to_string(&single).unwrap());
        let single_max = single_rows.iter().map(|row| row[1].abs()).fold(0.0f64, f64::max);
        assert_eq!(sweep_max.to_bits(), single_max.to_bits(), "tau = {tau}");
    }
}

#[test]
fn seed_phi_variants_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("phi.txt");
    std::fs::write(&table, "-3 1.0\n-1.5 0.5\n0 1.0\n").unwrap();

    for phi in ["const:1.0", &format!("table:{}", table.display())] {
        let out = run(&[
            "compare", "--a", "0.15", "--b", "6", "--tau", "3", "--t-max", "9", "--points", "50",
            "--seed-phi", phi, "--json", "-",
        ]);
        assert!(
            out.status.success(),
            "phi = {phi}, stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }

    let out = run(&[
        "compare", "--a", "0.15", "--b", "6", "--tau", "3", "--seed-phi", "bogus", "--json", "-",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
