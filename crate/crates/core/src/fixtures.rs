//! Standard generator sets used by tests, benches and the CLI.

use std::f64::consts::PI;

use crate::moebius::{BoundaryPoint, MoebiusMap};
use crate::pair::distance_from_cross_ratio;

fn disc_point(x: f64, y: f64) -> BoundaryPoint {
    BoundaryPoint::from_disc_angle(y.atan2(x))
}

/// (alpha, beta) of the five generators of the two-component example, as
/// points of the unit circle.
pub fn five_axes_endpoints() -> [(BoundaryPoint, BoundaryPoint); 5] {
    let a = disc_point(0.8, 0.6);
    let b = disc_point(-0.8, 0.6);
    let c = disc_point(-0.8, -0.6);
    let d = disc_point(0.8, -0.6);
    [(c, b), (a, b), (a, d), (c, d), (disc_point(1.0, 0.0), disc_point(-1.0, 0.0))]
}

/// The five-generator example with every translation length equal to `tau`.
pub fn five_axes(tau: f64) -> Vec<MoebiusMap> {
    five_axes_endpoints()
        .iter()
        .map(|(alpha, beta)| MoebiusMap::from_axis_and_length(*beta, *alpha, tau).expect("distinct endpoints"))
        .collect()
}

/// Reference cross-ratio table of the five-generator example, 0-based pairs.
pub fn five_axes_reference_table() -> Vec<(usize, usize, f64)> {
    let mut t = Vec::new();
    for i in 0..5 {
        for j in (i + 1)..5 {
            let c = match (i, j) {
                (0, 4) | (2, 4) => -1.0,
                (0, 2) | (1, 3) => 25.0 / 4.0,
                (1, 4) => 1.0 / 9.0,
                (3, 4) => 9.0,
                _ => 0.0,
            };
            t.push((i, j, c));
        }
    }
    t
}

/// f(z) = 2z and g(z) = z/2 + 1.
pub fn dilation_and_shift() -> (MoebiusMap, MoebiusMap) {
    (
        MoebiusMap::normalize(2.0, 0.0, 0.0, 1.0).expect("det 2"),
        MoebiusMap::normalize(0.5, 1.0, 0.0, 1.0).expect("det 1/2"),
    )
}

/// Axes (-1, 1) and (-R, R) with R chosen so the cross ratio is `c`; the
/// second axis is reversed when `c > 1`.
pub fn disjoint_pair(c: f64, tau_f: f64, tau_g: f64) -> (MoebiusMap, MoebiusMap) {
    let r = distance_from_cross_ratio(c).exp();
    let f = MoebiusMap::from_axis_and_length(BoundaryPoint::from_real(-1.0), BoundaryPoint::from_real(1.0), tau_f)
        .expect("distinct endpoints");
    let (beta, alpha) = if c > 1.0 { (r, -r) } else { (-r, r) };
    let g = MoebiusMap::from_axis_and_length(BoundaryPoint::from_real(beta), BoundaryPoint::from_real(alpha), tau_g)
        .expect("distinct endpoints");
    (f, g)
}

/// Diameters of the disc meeting at angle `theta`, attracting points at disc
/// angles 0.3 and 0.3 + theta.
pub fn crossing_pair(theta: f64, tau_f: f64, tau_g: f64) -> (MoebiusMap, MoebiusMap) {
    let p = |a: f64| BoundaryPoint::from_disc_angle(a);
    let a0 = 0.3;
    let f = MoebiusMap::from_axis_and_length(p(a0 + PI), p(a0), tau_f).expect("distinct endpoints");
    let g = MoebiusMap::from_axis_and_length(p(a0 + theta + PI), p(a0 + theta), tau_g).expect("distinct endpoints");
    (f, g)
}
