//! Two-dimensional SVG plots. Coordinates are the only place floats appear.

use std::fmt::Write;

use srr_core::rational::{self, Rational};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 48.0;
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

/// Decimal rendering with at most 12 significant digits.
pub fn coord(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    let s = format!("{rounded}");
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

pub struct Layer {
    pub label: String,
    pub vertices: Vec<Vec<Rational>>,
    pub filled: bool,
}

/// Counter-clockwise order around the centroid.
fn cyclic(points: &[Vec<Rational>]) -> Vec<(f64, f64)> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (rational::to_f64(&p[0]), rational::to_f64(&p[1])))
        .collect();
    let n = pts.len().max(1) as f64;
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut out = pts;
    out.sort_by(|a, b| {
        let ta = (a.1 - cy).atan2(a.0 - cx);
        let tb = (b.1 - cy).atan2(b.0 - cx);
        ta.total_cmp(&tb)
    });
    out
}

pub fn plot(layers: &[Layer], extent: f64) -> String {
    let extent = if extent > 0.0 { extent } else { 1.0 };
    let scale = (SIZE - 2.0 * MARGIN) / extent;
    let sx = |x: f64| MARGIN + x * scale;
    let sy = |y: f64| SIZE - MARGIN - y * scale;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    for (i, layer) in layers.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = cyclic(&layer.vertices)
            .into_iter()
            .map(|(x, y)| format!("{},{}", coord(sx(x)), coord(sy(y))))
            .collect();
        let (fill, opacity) = if layer.filled { (color, "0.35") } else { ("none", "0") };
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{fill}" fill-opacity="{opacity}" stroke="{color}" stroke-width="2"><title>{}</title></polygon>"#,
            pts.join(" "),
            escape(&layer.label)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            coord(SIZE - MARGIN - 120.0),
            coord(MARGIN + 16.0 * i as f64),
            escape(&layer.label)
        );
    }
    let (x0, y0) = (sx(0.0), sy(0.0));
    let _ = writeln!(
        s,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#000000"/>"##,
        coord(x0),
        coord(y0),
        coord(sx(extent)),
        coord(y0)
    );
    let _ = writeln!(
        s,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#000000"/>"##,
        coord(x0),
        coord(y0),
        coord(x0),
        coord(sy(extent))
    );
    let ticks = extent.ceil() as usize;
    let step = ((ticks as f64) / 10.0).ceil().max(1.0) as usize;
    for t in (0..=ticks).step_by(step) {
        let v = t as f64;
        if v > extent {
            break;
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{t}</text>"#, coord(sx(v)), coord(y0 + 16.0));
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{t}</text>"#, coord(x0 - 6.0), coord(sy(v) + 4.0));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">λ1</text>"#, coord(SIZE / 2.0), coord(SIZE - 8.0));
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">λ2</text>"#,
        coord(SIZE / 2.0),
        coord(SIZE / 2.0)
    );
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
