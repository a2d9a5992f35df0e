//! SVG drawing of generator axes in the disc, with an optional certified
//! union of boundary arcs. Output is deterministic for a given input.

use std::f64::consts::PI;
use std::fmt::Write;

use semicert_core::{ArcUnion, BoundaryArc, BoundaryPoint, MoebiusMap};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub size: u32,
    pub labels: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { size: 600, labels: true }
    }
}

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

struct Frame {
    c: f64,
    r: f64,
}

impl Frame {
    /// Screen position of a disc point (unit disc coordinates, y up).
    fn at(&self, x: f64, y: f64) -> (f64, f64) {
        (self.c + self.r * x, self.c - self.r * y)
    }

    fn boundary(&self, theta: f64) -> (f64, f64) {
        self.at(theta.cos(), theta.sin())
    }
}

/// Signed shortest angular difference b - a in (-pi, pi].
fn short_delta(a: f64, b: f64) -> f64 {
    let mut d = (b - a).rem_euclid(2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    }
    d
}

fn geodesic(out: &mut String, fr: &Frame, beta: f64, alpha: f64, color: &str) {
    let delta = short_delta(beta, alpha);
    let (p1, p2) = (fr.boundary(beta), fr.boundary(alpha));
    let half = 0.5 * delta.abs();
    // point of the geodesic nearest the origin, and the unit tangent there
    let (mid, tangent);
    if (PI - delta.abs()) < 1e-9 {
        let _ = write!(out, "<path d=\"M{:.3},{:.3} L{:.3},{:.3}\"", p1.0, p1.1, p2.0, p2.1);
        mid = (0.0, 0.0);
        tangent = (alpha.cos() - beta.cos(), alpha.sin() - beta.sin());
    } else {
        let phi = beta + 0.5 * delta;
        let (u, v) = (phi.cos(), phi.sin());
        let centre = fr.at(u / half.cos(), v / half.cos());
        let radius = fr.r * half.tan();
        let cross = (p1.0 - centre.0) * (p2.1 - centre.1) - (p1.1 - centre.1) * (p2.0 - centre.0);
        let sweep = u8::from(cross > 0.0);
        let _ = write!(
            out,
            "<path d=\"M{:.3},{:.3} A{:.3},{:.3} 0 0 {} {:.3},{:.3}\"",
            p1.0, p1.1, radius, radius, sweep, p2.0, p2.1
        );
        let rho = (1.0 - half.sin()) / half.cos();
        mid = (rho * u, rho * v);
        let t = (-v, u);
        let toward = (alpha.cos() - mid.0) * t.0 + (alpha.sin() - mid.1) * t.1;
        tangent = if toward >= 0.0 { t } else { (-t.0, -t.1) };
    }
    let _ = writeln!(out, " fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>");

    let norm = tangent.0.hypot(tangent.1);
    let (tx, ty) = (tangent.0 / norm, tangent.1 / norm);
    let (nx, ny) = (-ty, tx);
    let s = 0.035;
    let tip = fr.at(mid.0 + s * tx, mid.1 + s * ty);
    let l = fr.at(mid.0 - s * tx + 0.6 * s * nx, mid.1 - s * ty + 0.6 * s * ny);
    let r = fr.at(mid.0 - s * tx - 0.6 * s * nx, mid.1 - s * ty - 0.6 * s * ny);
    let _ = writeln!(
        out,
        "<polygon points=\"{:.3},{:.3} {:.3},{:.3} {:.3},{:.3}\" fill=\"{color}\"/>",
        tip.0, tip.1, l.0, l.1, r.0, r.1
    );
}

fn boundary_arc(out: &mut String, fr: &Frame, start: f64, sweep: f64) {
    let p1 = fr.boundary(start);
    let p2 = fr.boundary(start + sweep);
    // counterclockwise in the disc is the negative direction on screen
    let large = u8::from(sweep > PI);
    let _ = writeln!(
        out,
        "<path d=\"M{:.3},{:.3} A{:.3},{:.3} 0 {} 0 {:.3},{:.3}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"5\" stroke-opacity=\"0.6\"/>",
        p1.0, p1.1, fr.r, fr.r, large, p2.0, p2.1
    );
}

/// Arcs are given as (start angle, counterclockwise sweep).
pub fn render_svg(maps: &[MoebiusMap], union: &[(f64, f64)], opts: &RenderOptions) -> String {
    let size = opts.size as f64;
    let fr = Frame { c: 0.5 * size, r: 0.42 * size };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">",
        opts.size
    );
    let _ = writeln!(out, "<rect width=\"{0}\" height=\"{0}\" fill=\"#ffffff\"/>", opts.size);
    let _ = writeln!(
        out,
        "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>",
        fr.c, fr.c, fr.r
    );
    for &(start, sweep) in union {
        boundary_arc(&mut out, &fr, start, sweep);
    }
    let mut seen: Vec<BoundaryPoint> = Vec::new();
    for (i, m) in maps.iter().enumerate() {
        let Ok((alpha, beta, _)) = m.hyperbolic_data() else {
            continue;
        };
        let color = PALETTE[i % PALETTE.len()];
        let (a, b) = (alpha.disc_angle(), beta.disc_angle());
        geodesic(&mut out, &fr, b, a, color);
        // labels of generators sharing an attracting point are stacked outwards
        let stack = seen.iter().filter(|p| p.approx_eq(&alpha)).count();
        seen.push(alpha);
        if opts.labels {
            let rho = 1.08 + 0.07 * stack as f64;
            let p = fr.at(rho * a.cos(), rho * a.sin());
            let _ = writeln!(
                out,
                "<text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"{:.1}\" text-anchor=\"middle\" dominant-baseline=\"middle\" fill=\"{color}\">f{}</text>",
                p.0,
                p.1,
                0.03 * size,
                i + 1
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

pub fn union_angles(u: &ArcUnion) -> Vec<(f64, f64)> {
    u.arcs().iter().map(|a: &BoundaryArc| (a.start_angle(), a.sweep())).collect()
}

/// Reads `evidence.union` from a certificate report produced by `certify`.
pub fn union_from_certificate(v: &serde_json::Value) -> Result<Vec<(f64, f64)>, String> {
    let Some(arcs) = v.pointer("/evidence/union") else {
        return Ok(Vec::new());
    };
    let arcs = arcs.as_array().ok_or("evidence.union is not an array")?;
    arcs.iter()
        .enumerate()
        .map(|(k, a)| {
            let start = a.pointer("/start/angle").and_then(|x| x.as_f64());
            let sweep = a.get("sweep").and_then(|x| x.as_f64());
            match (start, sweep) {
                (Some(s), Some(w)) if w > 0.0 && w < 2.0 * PI => Ok((s, w)),
                _ => Err(format!("evidence.union[{k}] needs start.angle and a sweep in (0, 2pi)")),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use semicert_core::fixtures;

    #[test]
    fn one_path_per_axis() {
        let fs = fixtures::five_axes(41.0);
        let svg = render_svg(&fs, &[], &RenderOptions::default());
        assert_eq!(svg.matches("<polygon").count(), 5);
        assert_eq!(svg.matches("<text").count(), 5);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        let bare = render_svg(&fs, &[], &RenderOptions { size: 300, labels: false });
        assert_eq!(bare.matches("<text").count(), 0);
    }

    #[test]
    fn diameter_is_a_line() {
        let f = MoebiusMap::normalize(2.0, 0.0, 0.0, 0.5).unwrap();
        let svg = render_svg(&[f], &[], &RenderOptions::default());
        assert!(svg.contains(" L"));
    }

    #[test]
    fn orthogonal_circle_passes_through_endpoints() {
        let fr = Frame { c: 0.0, r: 1.0 };
        let (b, a) = (0.3, 1.9);
        let mut s = String::new();
        geodesic(&mut s, &fr, b, a, "#000000");
        let half = 0.5 * short_delta(b, a).abs();
        let phi = b + 0.5 * short_delta(b, a);
        let (cx, cy) = (phi.cos() / half.cos(), phi.sin() / half.cos());
        for t in [a, b] {
            let d = (t.cos() - cx).hypot(t.sin() - cy);
            assert!((d - half.tan()).abs() < 1e-12);
        }
    }

    #[test]
    fn certificate_union_roundtrip() {
        let v = serde_json::json!({"evidence": {"union": [{"start": {"angle": 1.0}, "sweep": 0.5}]}});
        assert_eq!(union_from_certificate(&v).unwrap(), vec![(1.0, 0.5)]);
        let bad = serde_json::json!({"evidence": {"union": [{"start": {"angle": 1.0}}]}});
        assert!(union_from_certificate(&bad).is_err());
        assert!(union_from_certificate(&serde_json::json!({})).unwrap().is_empty());
    }
}
