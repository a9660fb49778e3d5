//! CSV and SVG rendering plus path handling (`-` means stdout).
//!
//! Both renderers are pure functions of their inputs, so identical run
//! configurations produce byte-identical files.

use std::io::{self, Write};

use gaussdde::trace::EvalGrid;

/// Full-precision decimal: 17 significant digits round-trip any f64 exactly.
pub fn format_full(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// `t,<columns...>` with one newline-terminated row per grid node.
pub fn render_csv(grid: &EvalGrid, columns: &[Column]) -> String {
    let mut out = String::new();
    out.push('t');
    for column in columns {
        out.push(',');
        out.push_str(&column.name);
        debug_assert_eq!(column.values.len(), grid.count());
    }
    out.push('\n');
    for (i, t) in grid.nodes().enumerate() {
        out.push_str(&format_full(t));
        for column in columns {
            out.push(',');
            out.push_str(&format_full(column.values[i]));
        }
        out.push('\n');
    }
    out
}

pub struct Curve {
    pub label: String,
    pub color: &'static str,
    pub dashed: bool,
    pub values: Vec<f64>,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 62.0;
const MARGIN_RIGHT: f64 = 18.0;
const MARGIN_TOP: f64 = 18.0;
const MARGIN_BOTTOM: f64 = 46.0;

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.4e}")
    }
}

/// Standalone SVG 1.1, fixed 800x500 viewport, linear axes auto-scaled to
/// the data with a 5% margin, one polyline per curve, legend at top right.
pub fn render_svg(grid: &EvalGrid, curves: &[Curve]) -> String {
    let x_lo = grid.t_min();
    let x_hi = grid.t_max();
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for curve in curves {
        for &v in &curve.values {
            y_lo = y_lo.min(v);
            y_hi = y_hi.max(v);
        }
    }
    if !y_lo.is_finite() || !y_hi.is_finite() {
        y_lo = 0.0;
        y_hi = 1.0;
    }
    let y_span = (y_hi - y_lo).max(1e-300);
    let (y_lo, y_hi) = (y_lo - 0.05 * y_span, y_hi + 0.05 * y_span);
    let x_span = x_hi - x_lo;
    let (x_lo, x_hi) = (x_lo - 0.05 * x_span, x_hi + 0.05 * x_span);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_x = |t: f64| MARGIN_LEFT + (t - x_lo) / (x_hi - x_lo) * plot_w;
    let to_y = |v: f64| MARGIN_TOP + (y_hi - v) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n"
    ));

    // ticks and labels
    for i in 0..=5 {
        let frac = i as f64 / 5.0;
        let t = x_lo + frac * (x_hi - x_lo);
        let x = to_x(t);
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            HEIGHT - MARGIN_BOTTOM,
            HEIGHT - MARGIN_BOTTOM + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            HEIGHT - MARGIN_BOTTOM + 18.0,
            tick_label(t)
        ));
        let v = y_lo + frac * (y_hi - y_lo);
        let y = to_y(v);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{MARGIN_LEFT}\" y2=\"{y:.2}\" stroke=\"black\" stroke-width=\"1\"/>\n",
            MARGIN_LEFT - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            MARGIN_LEFT - 8.0,
            y + 4.0,
            tick_label(v)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">t</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 8.0
    ));

    for curve in curves {
        let dash = if curve.dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        let mut points = String::new();
        for (i, t) in grid.nodes().enumerate() {
            if i > 0 {
                points.push(' ');
            }
            points.push_str(&format!("{:.2},{:.2}", to_x(t), to_y(curve.values[i])));
        }
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{dash} points=\"{points}\"/>\n",
            curve.color
        ));
    }

    // legend
    for (i, curve) in curves.iter().enumerate() {
        let y = MARGIN_TOP + 16.0 + 18.0 * i as f64;
        let x = WIDTH - MARGIN_RIGHT - 150.0;
        let dash = if curve.dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{}\" stroke-width=\"2\"{dash}/>\n",
            x + 26.0,
            curve.color
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{}</text>\n",
            x + 32.0,
            y + 4.0,
            curve.label
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

/// Writes to a file, or to stdout when the path is `-`.
pub fn write_output(path: &str, content: &str) -> io::Result<()> {
    if path == "-" {
        io::stdout().write_all(content.as_bytes())
    } else {
        std::fs::write(path, content)
    }
}
