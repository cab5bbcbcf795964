//! Plain-text tables and a static SVG of the fundamental polygon.

use std::f64::consts::PI;
use std::fmt::Write;

use num_complex::Complex64;

use fuchsian::uniformize::{Convention, UniformizationResult};

fn complex(z: Complex64, precision: usize) -> String {
    // round before choosing signs so that -1e-17 prints as 0, not -0
    let round = |x: f64| {
        let r: f64 = format!("{x:.precision$}").parse().unwrap_or(x);
        if r == 0.0 {
            0.0
        } else {
            r
        }
    };
    let (re, im) = (round(z.re), round(z.im));
    let sign = if im < 0.0 { '-' } else { '+' };
    format!("{re:.precision$}{sign}{:.precision$}i", im.abs())
}

/// Header lines followed by one two-row block per generator.
pub fn table(r: &UniformizationResult, precision: usize) -> String {
    let p = &r.params;
    let mut out = String::new();
    let _ = writeln!(out, "curve         {}", r.curve);
    let _ = writeln!(out, "genus         {}", r.curve.genus);
    let _ = writeln!(out, "alpha         {}", p.alpha);
    let _ = writeln!(out, "a             {:.precision$}", p.a);
    let _ = writeln!(out, "tessellation  {}", r.tessellation);
    let _ = writeln!(out, "area          {:.precision$} ({}pi)", r.area, (r.area / PI).round());
    let det = match r.convention {
        Convention::Raw => "det = (1 - a^2)^2",
        Convention::Normalized => "det = 1",
    };
    let _ = writeln!(out, "convention    {} ({det})", r.convention);
    let _ = writeln!(out);

    let cells: Vec<(String, [String; 4], String)> = r
        .generators
        .iter()
        .zip(r.matrices())
        .zip(&r.verification.classes)
        .map(|((g, m), class)| {
            let e = m.entries().map(|z| complex(z, precision));
            (format!("S{}S{}", r.base_index, g.partner), e, class.to_string())
        })
        .collect();
    let label_w = cells.iter().map(|c| c.0.len()).max().unwrap_or(0);
    let col_w = cells.iter().flat_map(|c| c.1.iter().map(String::len)).max().unwrap_or(0);
    for (label, e, class) in &cells {
        let _ = writeln!(out, "{label:<label_w$}  [ {:>col_w$}  {:>col_w$} ]  {class}", e[0], e[1]);
        let _ = writeln!(out, "{:<label_w$}  [ {:>col_w$}  {:>col_w$} ]", "", e[2], e[3]);
    }
    out
}

const SIZE: f64 = 400.0;
const SCALE: f64 = 180.0;

fn screen(z: Complex64) -> (f64, f64) {
    (SIZE / 2.0 + SCALE * z.re, SIZE / 2.0 - SCALE * z.im)
}

/// Unit disk, ideal vertices joined by geodesic sides, and the interior fixed
/// points of the side transformations.
pub fn svg(r: &UniformizationResult) -> String {
    let vertices = r.curve.singularities();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, "  <title>{} fundamental polygon</title>", r.curve);
    let c = SIZE / 2.0;
    let _ = writeln!(out, r#"  <circle cx="{c}" cy="{c}" r="{SCALE}" fill="none" stroke="black" stroke-width="1"/>"#);

    let n = vertices.len();
    for k in 0..n {
        let (u, v) = (vertices[k], vertices[(k + 1) % n]);
        // geodesic between ideal points: circle orthogonal to the boundary with radius tan(Δ/2);
        // the screen y axis points down, so counterclockwise vertices need sweep flag 1
        let delta = (v / u).arg().rem_euclid(2.0 * PI);
        let radius = SCALE * (delta / 2.0).tan();
        let (x1, y1) = screen(u);
        let (x2, y2) = screen(v);
        let _ = writeln!(
            out,
            r#"  <path d="M {x1:.3} {y1:.3} A {radius:.3} {radius:.3} 0 0 1 {x2:.3} {y2:.3}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#
        );
    }
    for (k, z) in vertices.iter().enumerate() {
        let (x, y) = screen(*z);
        let _ =
            writeln!(out, r#"  <circle cx="{x:.3}" cy="{y:.3}" r="4" fill="black"><title>s{}</title></circle>"#, k + 1);
    }
    for (k, z) in r.fixed_points.iter().enumerate() {
        let (x, y) = screen(*z);
        let _ = writeln!(
            out,
            r#"  <circle cx="{x:.3}" cy="{y:.3}" r="3" fill="crimson"><title>fixed point of S{}</title></circle>"#,
            k + 1
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_formatting() {
        assert_eq!(complex(Complex64::new(1.30901699, -0.95105652), 7), "1.3090170-0.9510565i");
        assert_eq!(complex(Complex64::new(-0.0, 0.0), 3), "0.000+0.000i");
        assert_eq!(complex(Complex64::new(2.0, 1.5), 2), "2.00+1.50i");
        assert_eq!(complex(Complex64::new(-1e-12, -1e-17), 7), "0.0000000+0.0000000i");
    }
}
