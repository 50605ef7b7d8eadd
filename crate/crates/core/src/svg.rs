//! Deterministic SVG drawings of embeddings.

use std::fmt::Write;

use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq)]
pub struct SvgStyle {
    /// Pixels per unit length.
    pub scale: f64,
    pub margin: f64,
    pub node_radius: f64,
    /// Edges whose length differs from 1 by more than this are dashed and
    /// labeled with their length.
    pub tolerance: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle { scale: 120.0, margin: 30.0, node_radius: 9.0, tolerance: 1e-9 }
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Vertices as labeled circles, edges as segments, y axis pointing up.
/// Numbers are printed with fixed precision so identical input gives
/// identical bytes.
pub fn render_svg(g: &Graph, coords: &[[f64; 2]], style: &SvgStyle) -> String {
    assert_eq!(coords.len(), g.n(), "one coordinate pair per vertex");
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for c in coords {
        x0 = x0.min(c[0]);
        x1 = x1.max(c[0]);
        y0 = y0.min(c[1]);
        y1 = y1.max(c[1]);
    }
    if coords.is_empty() {
        (x0, y0, x1, y1) = (0.0, 0.0, 0.0, 0.0);
    }
    let m = style.margin;
    let w = (x1 - x0) * style.scale + 2.0 * m;
    let h = (y1 - y0) * style.scale + 2.0 * m;
    let px = |c: [f64; 2]| (m + (c[0] - x0) * style.scale, m + (y1 - c[1]) * style.scale);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(s, r#"<g stroke="black" stroke-width="1.5">"#).unwrap();
    let mut notes = Vec::new();
    for &(u, v) in g.edges() {
        let (a, b) = (px(coords[u]), px(coords[v]));
        let len = (coords[u][0] - coords[v][0]).hypot(coords[u][1] - coords[v][1]);
        let off = (len - 1.0).abs() > style.tolerance;
        let dash = if off { r#" stroke-dasharray="6,4" stroke="gray""# } else { "" };
        writeln!(
            s,
            r#"<line class="{}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"{dash}/>"#,
            if off { "off" } else { "unit" },
            a.0,
            a.1,
            b.0,
            b.1
        )
        .unwrap();
        if off {
            notes.push(((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0, len));
        }
    }
    writeln!(s, "</g>").unwrap();
    for (x, y, len) in notes {
        writeln!(
            s,
            r#"<text class="length" x="{x:.2}" y="{:.2}" font-size="11" fill="gray" text-anchor="middle">{len:.6}</text>"#,
            y - 4.0
        )
        .unwrap();
    }
    for (i, c) in coords.iter().enumerate() {
        let (x, y) = px(*c);
        writeln!(
            s,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}" fill="white" stroke="black"/>"#,
            style.node_radius
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
            y + 4.0,
            esc(g.label(i))
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
