//! Poincare-disk drawings of polygons and chains.

use std::fmt::Write;

use super::hyperboloid::{HLine, HPoint};
use super::polygon::{Color, GreenBlackPolygon};

const SAMPLES: usize = 64;

fn color_name(c: Color) -> &'static str {
    match c {
        Color::Green => "green",
        Color::Black => "black",
    }
}

/// Poincare coordinates of the geodesic segment `a b`, sampled evenly in
/// hyperbolic length. The y axis is flipped for SVG.
fn geodesic_polyline(a: &HPoint, b: &HPoint) -> String {
    let mut s = String::new();
    for k in 0..=SAMPLES {
        let w = a.lerp(b, k as f64 / SAMPLES as f64).poincare();
        let _ = write!(s, "{:.6},{:.6} ", w.re, -w.im);
    }
    s.trim_end().to_string()
}

/// An SVG document on the viewport `[-1.1, 1.1]^2` with the unit circle and
/// the polygon's edges colored by type.
pub fn polygon_svg(p: &GreenBlackPolygon) -> String {
    let pts = p.positions();
    let n = pts.len();
    let mut body = String::new();
    for i in 0..n {
        let _ = writeln!(
            body,
            r#"  <polyline points="{}" fill="none" stroke="{}" stroke-width="0.008"/>"#,
            geodesic_polyline(&pts[i], &pts[(i + 1) % n]),
            color_name(p.edges[i].color)
        );
    }
    for (v, x) in p.vertices.iter().zip(&pts) {
        let w = x.poincare();
        let _ = writeln!(body, r#"  <circle cx="{:.6}" cy="{:.6}" r="0.015" fill="{}"/>"#, w.re, -w.im, color_name(v.color));
    }
    document(&body)
}

/// Open chain drawn with the given edge colors.
pub fn chain_svg(points: &[HPoint], colors: &[Color]) -> String {
    let mut body = String::new();
    for (w, c) in points.windows(2).zip(colors) {
        let _ = writeln!(
            body,
            r#"  <polyline points="{}" fill="none" stroke="{}" stroke-width="0.008"/>"#,
            geodesic_polyline(&w[0], &w[1]),
            color_name(*c)
        );
    }
    document(&body)
}

fn document(body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.1 -1.1 2.2 2.2\" width=\"512\" height=\"512\">\n  <circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"gray\" stroke-width=\"0.005\"/>\n{body}</svg>\n"
    )
}

/// Poincare coordinates along the Klein chord between two ideal points.
fn chord_polyline(a: [f64; 2], b: [f64; 2]) -> String {
    let mut s = String::new();
    for k in 0..=SAMPLES {
        let t = k as f64 / SAMPLES as f64;
        let (x, y) = (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t);
        let q = 1.0 + (1.0 - x * x - y * y).max(0.0).sqrt();
        let _ = write!(s, "{:.6},{:.6} ", x / q, -y / q);
    }
    s.trim_end().to_string()
}

/// Raw oriented lines, each with a dot at its forward end. Used where the
/// lines bound no polygon.
pub fn lines_svg(lines: &[HLine]) -> String {
    let mut body = String::new();
    for l in lines {
        let [a, b] = l.ideal_ends().map(|e| [e.x / e.z, e.y / e.z]);
        let _ = writeln!(
            body,
            r#"  <polyline points="{}" fill="none" stroke="red" stroke-width="0.008"/>"#,
            chord_polyline(a, b)
        );
        let _ = writeln!(body, r#"  <circle cx="{:.6}" cy="{:.6}" r="0.02" fill="red"/>"#, b[0], -b[1]);
    }
    document(&body)
}
