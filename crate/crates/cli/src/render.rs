//! Chord diagram as SVG: the word's positions sit evenly on a circle,
//! clockwise from the top, and each crossing is a chord joining its two
//! occurrences.

use std::f64::consts::PI;
use std::fmt::Write as _;

use spherecurve::{GaussWord, Label, TrigonReport};

const SIZE: f64 = 420.0;
const RADIUS: f64 = 160.0;

fn point(k: usize, m: usize, radius: f64) -> (f64, f64) {
    let theta = -PI / 2.0 + 2.0 * PI * k as f64 / m as f64;
    (SIZE / 2.0 + radius * theta.cos(), SIZE / 2.0 + radius * theta.sin())
}

pub fn chord_diagram(word: &GaussWord, trigon: Option<&TrigonReport>) -> String {
    let m = word.len();
    let free = word.free_chords();
    let corners: Vec<Label> = trigon.map(|t| t.crossings.to_vec()).unwrap_or_default();
    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(svg, "  <title>{word}</title>").unwrap();
    writeln!(
        svg,
        r##"  <circle cx="{c:.2}" cy="{c:.2}" r="{RADIUS:.2}" fill="none" stroke="#444" stroke-width="1.5"/>"##,
        c = SIZE / 2.0
    )
    .unwrap();
    if let Some(t) = trigon {
        let mut edges: Vec<usize> = t.face.boundary.iter().map(|d| d.edge()).collect();
        edges.sort_unstable();
        edges.dedup();
        for e in edges {
            let (x1, y1) = point(e, m, RADIUS);
            let (x2, y2) = point((e + 1) % m, m, RADIUS);
            let large = if m == 1 { 1 } else { 0 };
            writeln!(
                svg,
                r##"  <path class="trigon-side" d="M {x1:.2} {y1:.2} A {RADIUS:.2} {RADIUS:.2} 0 {large} 1 {x2:.2} {y2:.2}" fill="none" stroke="#ff7f0e" stroke-width="5"/>"##
            )
            .unwrap();
        }
    }
    for label in word.labels() {
        let (i, j) = word.positions(label).expect("label from the word");
        let (x1, y1) = point(i, m, RADIUS);
        let (x2, y2) = point(j, m, RADIUS);
        let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
        let c = SIZE / 2.0;
        let (qx, qy) = (c + 0.4 * (mx - c), c + 0.4 * (my - c));
        let (class, color, width) = if free.contains(&label) {
            ("chord free", "#d62728", 3.0)
        } else if corners.contains(&label) {
            ("chord trigon", "#ff7f0e", 2.5)
        } else {
            ("chord", "#1f77b4", 1.5)
        };
        writeln!(
            svg,
            r#"  <path class="{class}" data-label="{label}" d="M {x1:.2} {y1:.2} Q {qx:.2} {qy:.2} {x2:.2} {y2:.2}" fill="none" stroke="{color}" stroke-width="{width}"/>"#
        )
        .unwrap();
    }
    for (k, &label) in word.letters().iter().enumerate() {
        let (x, y) = point(k, m, RADIUS);
        let (tx, ty) = point(k, m, RADIUS + 16.0);
        writeln!(svg, r##"  <circle cx="{x:.2}" cy="{y:.2}" r="3" fill="#444"/>"##).unwrap();
        writeln!(
            svg,
            r#"  <text x="{tx:.2}" y="{ty:.2}" font-family="sans-serif" font-size="12" text-anchor="middle" dominant-baseline="middle">{label}</text>"#
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    svg
}
