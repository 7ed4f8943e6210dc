//! Minimal log-log SVG plots.

use std::fmt::Write;

pub struct Curve<'a> {
    pub label: &'a str,
    pub times: &'a [f64],
    pub values: &'a [f64],
}

/// A reference line `C t^{-rate}` through the first point of `anchor`.
pub struct Guide<'a> {
    pub label: &'a str,
    pub rate: f64,
    pub anchor: usize,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 56.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Renders positive samples of each curve on log-log axes.
pub fn loglog_svg(title: &str, curves: &[Curve], guides: &[Guide]) -> String {
    let pts: Vec<Vec<(f64, f64)>> = curves
        .iter()
        .map(|c| {
            c.times
                .iter()
                .zip(c.values)
                .filter(|(t, v)| **t > 0.0 && **v > 0.0 && v.is_finite())
                .map(|(t, v)| (t.log10(), v.log10()))
                .collect()
        })
        .collect();
    let all = pts.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-9 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-9 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    for d in x0.ceil() as i32..=x1.floor() as i32 {
        let x = sx(d as f64);
        let _ = writeln!(s, r#"<text x="{x:.1}" y="{}" text-anchor="middle">1e{d}</text>"#, H - PAD + 16.0);
    }
    for d in y0.ceil() as i32..=y1.floor() as i32 {
        let y = sy(d as f64);
        let _ = writeln!(s, r#"<text x="{}" y="{y:.1}" text-anchor="end">1e{d}</text>"#, PAD - 4.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">t</text>"#, W / 2.0, H - 12.0);
    for (i, (c, p)) in curves.iter().zip(&pts).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = p.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        if !path.is_empty() {
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}" fill="{color}">{}</text>"#, W - PAD - 150.0, PAD + 16.0 * (i as f64 + 1.0), escape(c.label));
    }
    for (i, g) in guides.iter().enumerate() {
        let Some(&(ax, ay)) = pts.get(g.anchor).and_then(|p| p.first()) else {
            continue;
        };
        let y_at = |x: f64| ay - g.rate * (x - ax);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="5,4"/>"#,
            sx(ax),
            sy(y_at(ax).clamp(y0, y1)),
            sx(x1),
            sy(y_at(x1).clamp(y0, y1))
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="gray">{}</text>"#,
            PAD + 8.0,
            H - PAD - 8.0 - 16.0 * i as f64,
            escape(g.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
