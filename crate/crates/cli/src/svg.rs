//! Standalone SVG rendering of a two-file region. Exact vertices ride along
//! as `data-vertices` attributes; floats are used only for coordinates.

use std::fmt::Write;

use capregion::{Boundary, Rational, Scalar};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 56.0;

fn exact(chain: &Boundary) -> String {
    let parts: Vec<String> = chain.vertices().iter().map(|(x, y)| format!("{x},{y}")).collect();
    parts.join(" ")
}

/// Draws `lp` as a filled polygon and `closed`, when given, as a dashed
/// overlay. Axes are in units of `mu`.
pub fn render(title: &str, mu: &Rational, lp: &Boundary, closed: Option<&Boundary>) -> String {
    let scaled = |b: &Boundary| b.scaled(&(Rational::from_int(1) / mu.clone()));
    let lp_units = scaled(lp);
    let closed_units = closed.map(scaled);
    let extent = lp_units
        .vertices()
        .iter()
        .chain(closed_units.iter().flat_map(|c| c.vertices()))
        .flat_map(|(x, y)| [x.approx_f64(), y.approx_f64()])
        .fold(1.0_f64, f64::max)
        .ceil();
    let span = SIZE - 2.0 * MARGIN;
    let px = |v: f64| MARGIN + v / extent * span;
    let py = |v: f64| SIZE - MARGIN - v / extent * span;
    let points = |b: &Boundary| {
        let coords: Vec<String> = b
            .vertices()
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", px(x.approx_f64()), py(y.approx_f64())))
            .collect();
        coords.join(" ")
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, "  <title>{}</title>", escape(title));
    let _ = writeln!(out, r#"  <rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r##"  <polygon class="lp-region" data-mu="{mu}" data-vertices="{}" points="{:.2},{:.2} {}" fill="#4a7bd1" fill-opacity="0.25" stroke="#1f4fa3" stroke-width="2"/>"##,
        exact(lp),
        px(0.0),
        py(0.0),
        points(&lp_units)
    );
    if let (Some(c), Some(units)) = (closed, &closed_units) {
        let _ = writeln!(
            out,
            r##"  <polyline class="closed-form" data-vertices="{}" points="{}" fill="none" stroke="#c0392b" stroke-width="2" stroke-dasharray="6 4"/>"##,
            exact(c),
            points(units)
        );
    }
    let (x0, y0, x1, y1) = (px(0.0), py(0.0), px(extent), py(extent));
    let _ = writeln!(out, r#"  <line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}" stroke="black"/>"#);
    let _ = writeln!(out, r#"  <line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}" stroke="black"/>"#);
    for tick in 0..=extent as u32 {
        let t = f64::from(tick);
        let _ = writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" text-anchor="middle">{tick}</text>"#,
            px(t),
            y0 + 18.0
        );
        let _ = writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" text-anchor="end">{tick}</text>"#,
            x0 - 8.0,
            py(t) + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"  <text x="{:.2}" y="{:.2}" text-anchor="middle">λa / μ</text>"#,
        SIZE / 2.0,
        SIZE - 12.0
    );
    let _ = writeln!(
        out,
        r#"  <text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">λb / μ</text>"#,
        SIZE / 2.0,
        SIZE / 2.0
    );
    out.push_str("</svg>\n");
    out
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
