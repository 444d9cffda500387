//! Star plots as SVG path data.

use std::fmt::Write;

use crate::star::StarExport;

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const SCALE: f64 = 200.0;

fn xy(p: [f64; 2]) -> (f64, f64) {
    (p[0] * SCALE, -p[1] * SCALE)
}

/// One closed path per component, then a dot per vertex and per crossing.
/// Crossing dots are filled by sign when the star carries braid letters.
pub fn star_svg(star: &StarExport) -> String {
    let mut s = String::new();
    let size = 2.4 * SCALE;
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {size} {size}" width="{size}" height="{size}">"#,
        -size / 2.0,
        -size / 2.0
    );
    let _ = writeln!(s, r#"<title>{{{}/{}}}</title>"#, star.p, star.q);
    let _ = writeln!(s, r#"<g id="components" fill="none" stroke-width="2">"#);
    for (i, comp) in star.components.iter().enumerate() {
        let mut d = String::new();
        for (k, &chord) in comp.iter().enumerate() {
            let (x, y) = xy(star.vertices[star.chords[chord].0]);
            let _ = write!(d, "{}{x:.4} {y:.4} ", if k == 0 { "M" } else { "L" });
        }
        d.push('Z');
        let _ = writeln!(s, r#"<path id="component-{i}" stroke="{}" d="{d}"/>"#, COLORS[i % COLORS.len()]);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="vertices" fill="black">"#);
    for (k, v) in star.vertices.iter().enumerate() {
        let (x, y) = xy(*v);
        let _ = writeln!(s, r#"<circle id="vertex-{k}" cx="{x:.4}" cy="{y:.4}" r="4"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="crossings" stroke="black">"#);
    for x in &star.crossings {
        let (cx, cy) = xy(x.point);
        let fill = match x.sign.map(|s| s.as_i64()) {
            Some(1) => "white",
            Some(_) => "gray",
            None => "none",
        };
        let _ = writeln!(
            s,
            r#"<circle id="crossing-{}" data-sector="{}" data-depth="{}" cx="{cx:.4}" cy="{cy:.4}" r="3" fill="{fill}"/>"#,
            x.id, x.sector, x.depth
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}
