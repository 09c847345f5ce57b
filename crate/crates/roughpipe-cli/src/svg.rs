//! Minimal static SVG plots: log-log rate lines with fits, semilog decay,
//! and histograms. Deterministic output, no timestamps.

use std::fmt::Write as _;

pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
    pub color: &'a str,
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const ML: f64 = 70.0;
const MR: f64 = 20.0;
const MT: f64 = 40.0;
const MB: f64 = 50.0;

fn fmt(v: f64) -> String {
    if v == 0.0 || (v.abs() >= 1e-2 && v.abs() < 1e4) {
        format!("{v:.3}")
    } else {
        format!("{v:.1e}")
    }
}

/// Scatter + line plot; axes may be log10. A fitted line (slope, intercept)
/// in the transformed coordinates can be overlaid per series.
pub fn line_plot(title: &str, xlabel: &str, ylabel: &str, log_x: bool, log_y: bool, series: &[Series]) -> String {
    let tx = |x: f64| if log_x { x.log10() } else { x };
    let ty = |y: f64| if log_y { y.log10() } else { y };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for s in series {
        for &(x, y) in &s.points {
            if (log_x && x <= 0.0) || (log_y && y <= 0.0) {
                continue;
            }
            xs.push(tx(x));
            ys.push(ty(y));
        }
    }
    if xs.is_empty() {
        xs = vec![0.0, 1.0];
        ys = vec![0.0, 1.0];
    }
    let (x0, x1) = bounds(&xs);
    let (y0, y1) = bounds(&ys);
    let px = |x: f64| ML + (tx(x) - x0) / (x1 - x0) * (W - ML - MR);
    let py = |y: f64| H - MB - (ty(y) - y0) / (y1 - y0) * (H - MT - MB);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        W / 2.0,
        title
    )
    .unwrap();
    // Axes.
    writeln!(
        s,
        r#"<line x1="{ML}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        H - MB,
        W - MR,
        H - MB
    )
    .unwrap();
    writeln!(s, r#"<line x1="{ML}" y1="{MT}" x2="{ML}" y2="{}" stroke="black"/>"#, H - MB).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
        (ML + W - MR) / 2.0,
        H - 12.0,
        xlabel
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 {})">{}</text>"#,
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0,
        ylabel
    )
    .unwrap();
    // Ticks.
    for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let xv = x0 + frac * (x1 - x0);
        let yv = y0 + frac * (y1 - y0);
        let xp = ML + frac * (W - ML - MR);
        let yp = H - MB - frac * (H - MT - MB);
        let xlab = if log_x { fmt(10f64.powf(xv)) } else { fmt(xv) };
        let ylab = if log_y { fmt(10f64.powf(yv)) } else { fmt(yv) };
        writeln!(
            s,
            r#"<line x1="{xp}" y1="{}" x2="{xp}" y2="{}" stroke="black"/><text x="{xp}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="10">{xlab}</text>"#,
            H - MB,
            H - MB + 5.0,
            H - MB + 18.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<line x1="{}" y1="{yp}" x2="{ML}" y2="{yp}" stroke="black"/><text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="10">{ylab}</text>"#,
            ML - 5.0,
            ML - 8.0,
            yp + 4.0
        )
        .unwrap();
    }
    // Series.
    for (si, ser) in series.iter().enumerate() {
        let pts: Vec<(f64, f64)> = ser
            .points
            .iter()
            .filter(|&&(x, y)| !(log_x && x <= 0.0) && !(log_y && y <= 0.0))
            .map(|&(x, y)| (px(x), py(y)))
            .collect();
        if pts.len() > 1 {
            let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                path.join(" "),
                ser.color
            )
            .unwrap();
        }
        for (x, y) in &pts {
            writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{}"/>"#, ser.color).unwrap();
        }
        writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="{}">{}</text>"#,
            W - MR - 180.0,
            MT + 16.0 * (si as f64 + 1.0),
            ser.color,
            ser.label
        )
        .unwrap();
    }
    writeln!(s, "</svg>").unwrap();
    s
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in v {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if lo == hi {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Histogram of sample values.
pub fn histogram(title: &str, xlabel: &str, values: &[f64], bins: usize) -> String {
    if values.is_empty() {
        return line_plot(title, xlabel, "count", false, false, &[]);
    }
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let width = ((hi - lo) / bins as f64).max(1e-300);
    let mut counts = vec![0usize; bins];
    for &v in values {
        let b = (((v - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let pts: Vec<(f64, f64)> = counts
        .iter()
        .enumerate()
        .map(|(b, &c)| (lo + (b as f64 + 0.5) * width, c as f64))
        .collect();
    line_plot(title, xlabel, "count", false, false, &[Series { label: "histogram", points: pts, color: "#1f77b4" }])
}
