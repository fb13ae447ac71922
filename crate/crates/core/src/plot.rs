//! Deterministic SVG line charts for density curves.
//!
//! Output depends only on the input numbers: coordinates are printed with a
//! fixed precision and nothing (timestamps, ids) varies between runs.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 55.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

/// One curve of a chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Series {
    pub fn new(label: impl Into<String>, x: Vec<f64>, y: Vec<f64>) -> Self {
        Self {
            label: label.into(),
            x,
            y,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartLabels {
    pub title: String,
    pub x_axis: String,
    pub y_axis: String,
}

impl Default for ChartLabels {
    fn default() -> Self {
        Self {
            title: String::new(),
            x_axis: "wealth".into(),
            y_axis: "density".into(),
        }
    }
}

/// Read a `grid,density` CSV into a series.
pub fn read_kde_csv(path: &Path, label: impl Into<String>) -> Result<Series> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.len() != 2 || &headers[0] != "grid" || &headers[1] != "density" {
        return Err(Error::Data {
            path: path.into(),
            message: format!("expected header grid,density, found {}", headers.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let parse = |i: usize| {
            record[i].trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Data {
                path: path.into(),
                message: format!("row {}: column {i} is not a finite number", line + 2),
            })
        };
        x.push(parse(0)?);
        y.push(parse(1)?);
    }
    Ok(Series::new(label, x, y))
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        other => Error::Data {
            path: path.into(),
            message: format!("{other:?}"),
        },
    }
}

/// Tick positions covering `[lo, hi]` with a 1-2-5 step.
pub fn nice_ticks(lo: f64, hi: f64, target: usize) -> (Vec<f64>, f64) {
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    let raw = span / target.max(1) as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * magnitude);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    ((first..=last).map(|i| i as f64 * step).collect(), step)
}

fn tick_label(v: f64, step: f64) -> String {
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let s = format!("{v:.decimals$}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        format!("{:.decimals$}", 0.0)
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Render the series as a self-contained SVG document.
///
/// Fails with a configuration error when there is no series or any series
/// has no points, since there would be nothing meaningful to draw.
pub fn render_svg(series: &[Series], labels: &ChartLabels) -> Result<String> {
    if series.is_empty() {
        return Err(Error::Config("nothing to plot: no series given".into()));
    }
    for s in series {
        if s.x.is_empty() || s.x.len() != s.y.len() {
            return Err(Error::Config(format!("series '{}' is empty or has mismatched columns", s.label)));
        }
        if s.x.iter().chain(&s.y).any(|v| !v.is_finite()) {
            return Err(Error::Config(format!("series '{}' has non-finite values", s.label)));
        }
    }

    let fold = |f: fn(&Series) -> &Vec<f64>, init: f64, pick: fn(f64, f64) -> f64| {
        series.iter().flat_map(|s| f(s).iter().copied()).fold(init, pick)
    };
    let (mut x_lo, mut x_hi) = (fold(|s| &s.x, f64::INFINITY, f64::min), fold(|s| &s.x, f64::NEG_INFINITY, f64::max));
    let mut y_hi = fold(|s| &s.y, f64::NEG_INFINITY, f64::max);
    let mut y_lo = fold(|s| &s.y, f64::INFINITY, f64::min).min(0.0);
    if x_hi <= x_lo {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if y_hi <= y_lo {
        y_hi = y_lo + 1.0;
    }
    y_hi += 0.05 * (y_hi - y_lo);
    if y_lo < 0.0 {
        y_lo -= 0.05 * (y_hi - y_lo);
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let w = &mut svg;
    // Writing into a String cannot fail.
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    if !labels.title.is_empty() {
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            escape(&labels.title)
        );
    }

    let (x_ticks, x_step) = nice_ticks(x_lo, x_hi, 6);
    let (y_ticks, y_step) = nice_ticks(y_lo, y_hi, 5);
    let bottom = MARGIN_TOP + plot_h;
    let _ = writeln!(w, r##"<g stroke="#888" stroke-width="1">"##);
    let _ = writeln!(w, r#"<line x1="{MARGIN_LEFT:.2}" y1="{bottom:.2}" x2="{:.2}" y2="{bottom:.2}"/>"#, MARGIN_LEFT + plot_w);
    let _ = writeln!(w, r#"<line x1="{MARGIN_LEFT:.2}" y1="{MARGIN_TOP:.2}" x2="{MARGIN_LEFT:.2}" y2="{bottom:.2}"/>"#);
    for &t in &x_ticks {
        let _ = writeln!(w, r#"<line x1="{0:.2}" y1="{bottom:.2}" x2="{0:.2}" y2="{1:.2}"/>"#, sx(t), bottom + 5.0);
    }
    for &t in &y_ticks {
        let _ = writeln!(w, r#"<line x1="{0:.2}" y1="{1:.2}" x2="{MARGIN_LEFT:.2}" y2="{1:.2}"/>"#, MARGIN_LEFT - 5.0, sy(t));
    }
    let _ = writeln!(w, "</g>");

    let _ = writeln!(w, r#"<g fill="black">"#);
    for &t in &x_ticks {
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            sx(t),
            bottom + 19.0,
            tick_label(t, x_step)
        );
    }
    for &t in &y_ticks {
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 8.0,
            sy(t) + 4.0,
            tick_label(t, y_step)
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(&labels.x_axis)
    );
    let _ = writeln!(
        w,
        r#"<text x="18" y="{0:.2}" text-anchor="middle" transform="rotate(-90 18 {0:.2})">{1}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        escape(&labels.y_axis)
    );
    let _ = writeln!(w, "</g>");

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = s.x.iter().zip(&s.y).map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            w,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
    }

    let legend_x = MARGIN_LEFT + plot_w + 15.0;
    let _ = writeln!(w, r#"<g class="legend">"#);
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN_TOP + 10.0 + 20.0 * i as f64;
        let _ = writeln!(
            w,
            r#"<line x1="{legend_x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#,
            legend_x + 22.0
        );
        let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, legend_x + 28.0, y + 4.0, escape(&s.label));
    }
    let _ = writeln!(w, "</g>");
    let _ = writeln!(w, "</svg>");
    Ok(svg)
}
