//! Static SVG line charts for sweep aggregates, τ curves and strength CDFs.
//!
//! Plots only serialize already-computed tables. Output is deterministic:
//! no timestamps, ids or other run metadata are embedded. Each data series is
//! exactly one `<path>` element; axes and ticks use `<line>`.

use std::fmt::Write;

use crate::experiments::{CurvePoint, StrengthCdf, SweepAggregate};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Draw series as right-continuous steps (for CDFs).
    pub steps: bool,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

impl Chart {
    pub fn to_svg(&self) -> String {
        let all = || self.series.iter().flat_map(|s| s.points.iter().copied());
        let (x0, x1) = range(all().map(|p| p.0));
        let (y0, y1) = range(all().map(|p| p.1));
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| TOP + plot_h - (y - y0) / (y1 - y0) * plot_h;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            LEFT + plot_w / 2.0,
            escape(&self.title)
        );
        let (bx, by) = (LEFT, TOP + plot_h);
        let _ = writeln!(svg, r#"<line x1="{bx:.2}" y1="{by:.2}" x2="{:.2}" y2="{by:.2}" stroke="black"/>"#, LEFT + plot_w);
        let _ = writeln!(svg, r#"<line x1="{bx:.2}" y1="{TOP:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="black"/>"#);
        for t in 0..=4 {
            let f = t as f64 / 4.0;
            let xv = x0 + f * (x1 - x0);
            let yv = y0 + f * (y1 - y0);
            let (px, py) = (sx(xv), sy(yv));
            let _ = writeln!(svg, r#"<line x1="{px:.2}" y1="{by:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, by + 5.0);
            let _ = writeln!(svg, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, by + 18.0, tick_label(xv));
            let _ = writeln!(svg, r#"<line x1="{:.2}" y1="{py:.2}" x2="{bx:.2}" y2="{py:.2}" stroke="black"/>"#, bx - 5.0);
            let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, bx - 8.0, py + 4.0, tick_label(yv));
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            TOP + plot_h / 2.0,
            TOP + plot_h / 2.0,
            escape(&self.y_label)
        );

        for (k, series) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let mut d = String::new();
            let mut prev_y: Option<f64> = None;
            for (n, &(x, y)) in series.points.iter().enumerate() {
                if n == 0 {
                    let _ = write!(d, "M{:.2},{:.2}", sx(x), sy(y));
                } else {
                    if let (true, Some(py)) = (self.steps, prev_y) {
                        let _ = write!(d, " L{:.2},{:.2}", sx(x), sy(py));
                    }
                    let _ = write!(d, " L{:.2},{:.2}", sx(x), sy(y));
                }
                prev_y = Some(y);
            }
            let _ = writeln!(
                svg,
                r#"<path class="series" data-label="{}" d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                escape(&series.label)
            );
            let ly = TOP + 10.0 + 18.0 * k as f64;
            let lx = WIDTH - RIGHT + 15.0;
            let _ = writeln!(svg, r#"<rect x="{lx:.2}" y="{:.2}" width="14" height="3" fill="{color}"/>"#, ly - 4.0);
            let _ = writeln!(svg, r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#, lx + 20.0, escape(&series.label));
        }
        svg.push_str("</svg>\n");
        svg
    }
}

/// Minimum, mean and maximum entropy gain against `c_ij`.
pub fn sweep_chart(agg: &SweepAggregate, title: &str) -> Chart {
    let pick = |f: fn(&crate::experiments::Bucket) -> f64| {
        agg.buckets.iter().map(|b| (b.c_ij as f64, f(b))).collect()
    };
    Chart {
        title: title.into(),
        x_label: "common friends c_ij".into(),
        y_label: "entropy gain".into(),
        series: vec![
            Series { label: "max".into(), points: pick(|b| b.max) },
            Series { label: "mean".into(), points: pick(|b| b.mean) },
            Series { label: "min".into(), points: pick(|b| b.min) },
        ],
        steps: false,
    }
}

/// τ against clustering.
pub fn curve_chart(points: &[CurvePoint], title: &str) -> Chart {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p.clustering, p.tau)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    Chart {
        title: title.into(),
        x_label: "clustering c".into(),
        y_label: "positiveness tau".into(),
        series: vec![Series { label: "tau".into(), points: pts }],
        steps: false,
    }
}

/// Overlaid tie-strength CDFs, one series per input.
pub fn cdf_chart(cdfs: &[(String, StrengthCdf)], title: &str) -> Chart {
    let series = cdfs
        .iter()
        .map(|(label, cdf)| {
            let mut points = vec![(0.0, 0.0)];
            if cdf.points.first().is_some_and(|p| p.0 == 0.0) {
                points.clear();
            }
            points.extend(cdf.points.iter().copied());
            Series { label: label.clone(), points }
        })
        .collect();
    Chart {
        title: title.into(),
        x_label: "tie strength w_ij".into(),
        y_label: "cumulative fraction".into(),
        series,
        steps: true,
    }
}
