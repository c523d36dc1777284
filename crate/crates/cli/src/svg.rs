//! Deterministic SVG line plots in the complex plane with 1:1 aspect.

use std::fmt::Write;

use cesaro_core::C64;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

pub struct Series {
    pub label: String,
    pub points: Vec<C64>,
}

/// Square window holding every point, the origin, and (optionally) the unit circle.
fn window(series: &[Series], unit_circle: bool) -> (f64, f64, f64) {
    let (mut x0, mut x1, mut y0, mut y1) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    if unit_circle {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    for z in series.iter().flat_map(|s| s.points.iter()) {
        x0 = x0.min(z.re);
        x1 = x1.max(z.re);
        y0 = y0.min(z.im);
        y1 = y1.max(z.im);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12) * 1.05;
    (0.5 * (x0 + x1), 0.5 * (y0 + y1), span)
}

pub fn render(title: &str, series: &[Series], unit_circle: bool) -> String {
    let (cx, cy, span) = window(series, unit_circle);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let px = |x: f64| SIZE / 2.0 + (x - cx) * scale;
    let py = |y: f64| SIZE / 2.0 - (y - cy) * scale;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<title>{}</title>"#, escape(title));
    let _ = writeln!(
        s,
        r##"<g stroke="#888" stroke-width="1"><line x1="0" y1="{y:.3}" x2="{SIZE}" y2="{y:.3}"/><line x1="{x:.3}" y1="0" x2="{x:.3}" y2="{SIZE}"/></g>"##,
        x = px(0.0),
        y = py(0.0)
    );
    if unit_circle {
        let _ = writeln!(
            s,
            r##"<circle cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="#444" stroke-dasharray="4 4"/>"##,
            px(0.0),
            py(0.0),
            scale
        );
    }
    for (i, ser) in series.iter().enumerate() {
        let pts: Vec<String> = ser
            .points
            .iter()
            .map(|z| format!("{:.3},{:.3}", px(z.re), py(z.im)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline data-label="{}" fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            escape(&ser.label),
            PALETTE[i % PALETTE.len()],
            pts.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14" fill="{}">{}</text>"#,
            MARGIN,
            MARGIN + 18.0 * i as f64,
            PALETTE[i % PALETTE.len()],
            escape(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
