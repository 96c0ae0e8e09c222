//! SVG diagrams: the domain as a horizontal line, one arc above per piece
//! and the matching arc below over its image.

use std::fmt::Write;

use itm_core::{HalfOpenInterval, Itm, Rational};

const WIDTH: i64 = 800;
const HEIGHT: i64 = 320;
const MARGIN: i64 = 40;
const BASELINE: i64 = 160;
const PALETTE: [&str; 8] = [
    "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
];

fn px(v: &Rational) -> Rational {
    Rational::from_integer(MARGIN) + v * Rational::from_integer(WIDTH - 2 * MARGIN)
}

fn num(v: &Rational) -> String {
    v.to_decimal_string(2)
}

/// Half-ellipse over `iv`, above the baseline when `above`.
fn arc(out: &mut String, iv: &HalfOpenInterval, above: bool, color: &str) {
    let x1 = px(iv.left());
    let x2 = px(iv.right());
    let rx = (&x2 - &x1) / Rational::from_integer(2);
    let ry = &rx / Rational::from_integer(2);
    let sweep = if above { 1 } else { 0 };
    writeln!(
        out,
        r#"  <path d="M {x1} {y} A {rx} {ry} 0 0 {sweep} {x2} {y}" fill="none" stroke="{color}" stroke-width="2"/>"#,
        x1 = num(&x1),
        x2 = num(&x2),
        rx = num(&rx),
        ry = num(&ry),
        y = BASELINE,
    )
    .expect("writing to a String");
}

pub fn render_svg(t: &Itm) -> String {
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .expect("writing to a String");
    writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"  <line x1="{MARGIN}" y1="{BASELINE}" x2="{}" y2="{BASELINE}" stroke="black" stroke-width="1"/>"#,
        WIDTH - MARGIN
    )
    .unwrap();
    for j in 0..=t.d() {
        let x = num(&px(&t.edge(j)));
        writeln!(
            out,
            r#"  <line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="black" stroke-width="1"/>"#,
            BASELINE - 5,
            BASELINE + 5
        )
        .unwrap();
        writeln!(
            out,
            r#"  <text x="{x}" y="{}" font-family="monospace" font-size="11" text-anchor="middle">{}</text>"#,
            HEIGHT - 8,
            t.edge(j)
        )
        .unwrap();
    }
    for j in 0..t.d() {
        let color = PALETTE[j % PALETTE.len()];
        let piece = t.interval(j);
        let image = t.piece_image(j);
        arc(&mut out, &piece, true, color);
        arc(&mut out, &image, false, color);
        let label_x = num(&px(&piece.midpoint()));
        writeln!(
            out,
            r#"  <text x="{label_x}" y="{}" font-family="monospace" font-size="12" fill="{color}" text-anchor="middle">{}</text>"#,
            BASELINE - 8,
            j + 1
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
