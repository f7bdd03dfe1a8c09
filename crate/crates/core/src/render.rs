//! Pictures of diagrams: a plain-text drawing and a standalone SVG.
//!
//! Both draw the source at the top and one row per slice downwards. Joins
//! are `V`, crossings `X` and emerges `o` (circles in SVG).

use std::fmt::Write;

use crate::diagram::{Diagram, Generator, ObjWord};

fn pitch(d: &Diagram) -> usize {
    let digits = d.degree().to_string().len();
    (digits + 1).max(2)
}

fn label_row(w: &ObjWord, pitch: usize) -> String {
    let mut s = String::new();
    for l in w.iter() {
        let _ = write!(s, "{:<pitch$}", l.0);
    }
    s.trim_end().to_string()
}

fn put(row: &mut Vec<char>, col: usize, c: char) {
    if row.len() <= col {
        row.resize(col + 1, ' ');
    }
    row[col] = c;
}

/// A text drawing: label rows alternate with generator rows, each
/// generator row annotated with the generator and its offset.
pub fn render_ascii(d: &Diagram) -> String {
    let p = pitch(d);
    let cuts = d.cuts();
    let mut rows: Vec<(String, String)> = Vec::new();
    let width = cuts.iter().map(|c| label_row(c, p).len()).max().unwrap_or(0);
    for (i, s) in d.slices().iter().enumerate() {
        let inputs = cuts[i].len();
        let o = s.offset();
        let mut row: Vec<char> = Vec::new();
        match s.gen {
            Generator::Emerge(_) => {
                for q in 0..=inputs {
                    put(&mut row, q * p, if q == o { 'o' } else { '|' });
                }
            }
            Generator::Join(_) | Generator::Cross(..) => {
                let glyph = if matches!(s.gen, Generator::Join(_)) { 'V' } else { 'X' };
                for q in 0..inputs {
                    if q != o && q != o + 1 {
                        put(&mut row, q * p, '|');
                    }
                }
                put(&mut row, o * p + p / 2, glyph);
            }
        }
        let line: String = row.into_iter().collect();
        rows.push((line, format!("{} @{o}", s.gen)));
    }
    let pad = width.max(rows.iter().map(|r| r.0.len()).max().unwrap_or(0)) + 3;
    let mut out = String::new();
    let _ = writeln!(out, "k={}", d.degree());
    let _ = writeln!(out, "{}", label_row(&cuts[0], p));
    for (i, (glyph, note)) in rows.iter().enumerate() {
        let _ = writeln!(out, "{glyph:<pad$}{note}");
        let _ = writeln!(out, "{}", label_row(&cuts[i + 1], p));
    }
    out
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn colour(label: u32) -> &'static str {
    PALETTE[label as usize % PALETTE.len()]
}

/// A standalone SVG document. Strands are coloured by label; emerges are
/// small circles where the new strand starts.
pub fn render_svg(d: &Diagram) -> String {
    const DX: f64 = 40.0;
    const DY: f64 = 50.0;
    const MARGIN: f64 = 30.0;
    let cuts = d.cuts();
    let w = d.max_width().max(1) as f64 * DX + 2.0 * MARGIN;
    let h = d.len() as f64 * DY + 2.0 * MARGIN;
    let x = |q: usize| MARGIN + DX * (q as f64 + 0.5);
    let y = |i: usize| MARGIN + DY * i as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let line = |out: &mut String, x1: f64, y1: f64, x2: f64, y2: f64, l: u32| {
        let _ = writeln!(
            out,
            r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{}" stroke-width="3" stroke-linecap="round"/>"#,
            colour(l)
        );
    };
    for (i, s) in d.slices().iter().enumerate() {
        let (y0, y1) = (y(i), y(i + 1));
        let ym = (y0 + y1) / 2.0;
        let o = s.offset();
        let (inp, outp) = s.gen.arity();
        let before = cuts[i].labels();
        for (q, l) in before.iter().enumerate().take(o) {
            line(&mut out, x(q), y0, x(q), y1, l.0);
        }
        for (q, l) in before.iter().enumerate().skip(o + inp) {
            line(&mut out, x(q), y0, x(q + outp - inp), y1, l.0);
        }
        match s.gen {
            Generator::Emerge(a) => {
                line(&mut out, x(o), ym, x(o), y1, a.0);
                let _ = writeln!(out, r#"<circle cx="{}" cy="{ym}" r="5" fill="{}"/>"#, x(o), colour(a.0));
            }
            Generator::Join(a) => {
                let xm = x(o);
                line(&mut out, x(o), y0, xm, ym, a.0);
                line(&mut out, x(o + 1), y0, xm, ym, a.0);
                line(&mut out, xm, ym, xm, y1, a.0);
            }
            Generator::Cross(a, b) => {
                line(&mut out, x(o), y0, x(o + 1), y1, a.0);
                line(&mut out, x(o + 1), y0, x(o), y1, b.0);
            }
        }
    }
    if d.is_identity() {
        for (q, l) in d.src().iter().enumerate() {
            line(&mut out, x(q), y(0), x(q), y(0) + DY / 2.0, l.0);
        }
    }
    for (row, word, dy) in [(0, d.src(), -8.0), (d.len(), d.tgt(), 20.0)] {
        for (q, l) in word.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-family="monospace" font-size="14" text-anchor="middle">{}</text>"#,
                x(q),
                y(row) + dy,
                l.0
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tw::beta2;

    #[test]
    fn ascii_of_beta2() {
        let s = render_ascii(&beta2());
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "k=1");
        assert_eq!(lines[1], "0 1 0 1");
        assert!(lines[2].contains('X') && lines[2].ends_with("t(1,0) @1"), "{s}");
        assert_eq!(lines[3], "0 0 1 1");
        assert!(lines[4].contains('V') && lines[4].ends_with("m(0) @0"), "{s}");
        assert_eq!(lines[5], "0 1 1");
    }

    #[test]
    fn svg_is_well_formed() {
        let d = Diagram::from_placements(1, ObjWord::from_values(&[1]), &[(Generator::emerge(0), 0)]).unwrap();
        let s = render_svg(&d);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<circle").count(), 1);
        assert_eq!(render_svg(&beta2()).matches("<line").count(), 4 + 5);
    }
}
