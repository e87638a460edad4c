//! Scatter plot rendering: data points as circles, predictions as a
//! polyline, written as a standalone SVG with no dependencies.
//!
//! The output is a pure function of the CSV contents, so rendering the same
//! file twice gives byte-identical SVG.

use std::fmt::Write as _;
use std::path::Path;

use erm_core::{load_plot_csv, Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 55.0;
const MARGIN_RIGHT: f64 = 25.0;
const MARGIN_TOP: f64 = 25.0;
const MARGIN_BOTTOM: f64 = 45.0;

struct Range {
    lo: f64,
    hi: f64,
}

impl Range {
    fn of(values: impl Iterator<Item = f64>) -> Range {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        // Pad by 5% of the span so points never sit on the frame; degenerate
        // spans get a unit pad.
        let pad = if hi > lo { 0.05 * (hi - lo) } else { 1.0 };
        Range {
            lo: lo - pad,
            hi: hi + pad,
        }
    }

    fn clamp(&self, v: f64) -> f64 {
        v.max(self.lo).min(self.hi)
    }
}

/// Renders a plot CSV (columns `x,y,yhat`) into `out`.
pub fn emit_svg(plot_csv: impl AsRef<Path>, out: impl AsRef<Path>) -> Result<()> {
    let (dataset, predictions) = load_plot_csv(plot_csv.as_ref())?;
    let xs: Vec<f64> = dataset
        .points()
        .iter()
        .map(|p| p.features().as_slice()[0])
        .collect();
    let ys: Vec<f64> = dataset.points().iter().map(|p| p.label()).collect();

    let x_range = Range::of(xs.iter().copied());
    let y_range = Range::of(ys.iter().copied().chain(predictions.iter().copied()));

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_range.lo) / (x_range.hi - x_range.lo) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (y_range.hi - y) / (y_range.hi - y_range.lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    // Axes through the origin when it is in range, otherwise along the
    // nearest edge of the data window.
    let axis_y = sy(y_range.clamp(0.0));
    let axis_x = sx(x_range.clamp(0.0));
    let _ = writeln!(
        svg,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
        MARGIN_LEFT,
        axis_y,
        MARGIN_LEFT + plot_w,
        axis_y
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
        axis_x,
        MARGIN_TOP,
        axis_x,
        MARGIN_TOP + plot_h
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="14">feature x</text>"#,
        MARGIN_LEFT + plot_w - 70.0,
        axis_y - 8.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="14">label y</text>"#,
        axis_x + 8.0,
        MARGIN_TOP + 14.0
    );

    // Prediction polyline, vertices in file order.
    let mut points = String::new();
    for (x, yhat) in xs.iter().zip(&predictions) {
        let _ = write!(points, "{:.2},{:.2} ", sx(*x), sy(*yhat));
    }
    let _ = writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        points.trim_end()
    );

    // Data circles, drawn over the line.
    for (x, y) in xs.iter().zip(&ys) {
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="none" stroke="black" stroke-width="1"/>"#,
            sx(*x),
            sy(*y)
        );
    }
    let _ = writeln!(svg, "</svg>");

    let out = out.as_ref();
    std::fs::write(out, svg).map_err(|source| Error::IoFailure {
        path: out.to_path_buf(),
        source,
    })
}
