//! Contour plot of `|p| = level` by marching squares.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::check_level;
use crate::error::{Error, Result};
use crate::poly::MonicPolynomial;

const CLAMP: f64 = 50.0;
const PIXELS: f64 = 800.0;

/// Renders the level curve and the zeros as an SVG document. The window is
/// the zeros' bounding box padded by `1.05 · max(1, level^{1/n})`. Output is
/// byte-identical for identical input.
pub fn render_svg(p: &MonicPolynomial, level: f64, resolution: usize) -> Result<String> {
    check_level(level)?;
    if resolution < 8 {
        return Err(Error::InvalidArgument(format!("plot resolution must be at least 8, got {resolution}")));
    }
    let zeros = p.zeros();
    let n = zeros.len();
    let log_level = level.ln();
    let pad = 1.05 * level.powf(1.0 / n as f64).max(1.0);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for z in zeros {
        x0 = x0.min(z.re - pad);
        x1 = x1.max(z.re + pad);
        y0 = y0.min(z.im - pad);
        y1 = y1.max(z.im + pad);
    }
    let span = (x1 - x0).max(y1 - y0);
    let h = span / resolution as f64;
    let nx = ((x1 - x0) / h).ceil() as usize;
    let ny = ((y1 - y0) / h).ceil() as usize;

    let vertex = |ix: usize, iy: usize| Complex64::new(x0 + ix as f64 * h, y0 + iy as f64 * h);
    let mut f = vec![0.0; (nx + 1) * (ny + 1)];
    for iy in 0..=ny {
        for ix in 0..=nx {
            let v = p.log_abs_evaluate(vertex(ix, iy)) - log_level;
            f[iy * (nx + 1) + ix] = v.clamp(-CLAMP, CLAMP);
        }
    }
    let at = |ix: usize, iy: usize| f[iy * (nx + 1) + ix];

    let mut path = String::new();
    for iy in 0..ny {
        for ix in 0..nx {
            // Corners counter-clockwise from bottom-left.
            let corners = [(ix, iy), (ix + 1, iy), (ix + 1, iy + 1), (ix, iy + 1)];
            let vals = corners.map(|(a, b)| at(a, b));
            let crossing = |e: usize| {
                let (a, b) = (e, (e + 1) % 4);
                let t = vals[a] / (vals[a] - vals[b]);
                let za = vertex(corners[a].0, corners[a].1);
                let zb = vertex(corners[b].0, corners[b].1);
                za + (zb - za) * t
            };
            let edges: Vec<usize> = (0..4).filter(|&e| (vals[e] < 0.0) != (vals[(e + 1) % 4] < 0.0)).collect();
            let pairs: Vec<(usize, usize)> = match edges.len() {
                2 => vec![(edges[0], edges[1])],
                4 => {
                    let centre = p.log_abs_evaluate(vertex(ix, iy) + Complex64::new(0.5 * h, 0.5 * h)) - log_level;
                    if (centre < 0.0) == (vals[0] < 0.0) {
                        vec![(0, 1), (2, 3)]
                    } else {
                        vec![(3, 0), (1, 2)]
                    }
                }
                _ => Vec::new(),
            };
            for (a, b) in pairs {
                let (za, zb) = (crossing(a), crossing(b));
                let _ = write!(path, "M{:.6} {:.6}L{:.6} {:.6}", za.re, -za.im, zb.re, -zb.im);
            }
        }
    }

    let width = nx as f64 * h;
    let height = ny as f64 * h;
    let stroke = span / 600.0;
    let marker = span / 250.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
        PIXELS,
        PIXELS * height / width,
        x0,
        -(y0 + height),
        width,
        height
    );
    let _ = writeln!(out, r#"<rect x="{x0:.6}" y="{:.6}" width="{width:.6}" height="{height:.6}" fill="white"/>"#, -(y0 + height));
    let _ = writeln!(out, r#"<path d="{path}" fill="none" stroke="black" stroke-width="{stroke:.6}"/>"#);
    let mut sorted = zeros.to_vec();
    sorted.sort_by(crate::poly::lexicographic);
    for z in sorted {
        let _ = writeln!(out, r#"<circle cx="{:.6}" cy="{:.6}" r="{marker:.6}" fill="red"/>"#, z.re, -z.im);
    }
    out.push_str("</svg>\n");
    Ok(out)
}
