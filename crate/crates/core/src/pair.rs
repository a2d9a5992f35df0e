//! Cross ratios of pairs of hyperbolic maps and the geometry of their axes.

use std::f64::consts::PI;

use thiserror::Error;

use crate::arcs::BoundaryArc;
use crate::moebius::{det, hyperbolic_distance, BoundaryPoint, Geodesic, MoebiusError, MoebiusMap, PlanePoint};
use crate::tol::CROSS_RATIO_EPS;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("map is not hyperbolic")]
    NotHyperbolic,
    #[error("cross ratio {0:?} has no angle or distance")]
    DegenerateCrossRatio(CrossRatioValue),
    #[error("axes cross")]
    AxesCross,
    #[error("axes do not cross")]
    AxesDoNotCross,
    #[error("geodesics share an endpoint")]
    SharedEndpoint,
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CrossRatioValue {
    Finite(f64),
    Infinite,
}

impl CrossRatioValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            CrossRatioValue::Finite(c) => Some(*c),
            CrossRatioValue::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairConfig {
    Crossing {
        theta: f64,
    },
    /// `nested_attractors` is set when the axes point the same way (0 < C < 1).
    Disjoint {
        d: f64,
        nested_attractors: bool,
    },
    SharedAlpha,
    SharedBeta,
    AlphaMeetsBeta,
    ParabolicDegenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGeometry {
    pub cross_ratio: CrossRatioValue,
    pub config: PairConfig,
}

impl PairGeometry {
    pub fn theta(&self) -> Result<f64, GeometryError> {
        match self.config {
            PairConfig::Crossing { theta } => Ok(theta),
            _ => Err(GeometryError::DegenerateCrossRatio(self.cross_ratio)),
        }
    }

    pub fn distance(&self) -> Result<f64, GeometryError> {
        match self.config {
            PairConfig::Disjoint { d, .. } => Ok(d),
            _ => Err(GeometryError::DegenerateCrossRatio(self.cross_ratio)),
        }
    }
}

/// Fixed points (alpha, beta) of a hyperbolic map.
pub fn fixed_points(f: &MoebiusMap) -> Result<(BoundaryPoint, BoundaryPoint), GeometryError> {
    let (a, b, _) = f.hyperbolic_data().map_err(|_| GeometryError::NotHyperbolic)?;
    Ok((a, b))
}

/// Cross ratio from the four fixed points, in homogeneous form.
pub fn cross_ratio_points(
    alpha_f: &BoundaryPoint,
    beta_f: &BoundaryPoint,
    alpha_g: &BoundaryPoint,
    beta_g: &BoundaryPoint,
) -> CrossRatioValue {
    if alpha_f.approx_eq(beta_g) || beta_f.approx_eq(alpha_g) {
        return CrossRatioValue::Infinite;
    }
    let num = det(alpha_f, alpha_g) * det(beta_f, beta_g);
    let den = det(alpha_f, beta_g) * det(beta_f, alpha_g);
    CrossRatioValue::Finite(num / den)
}

pub fn cross_ratio(f: &MoebiusMap, g: &MoebiusMap) -> Result<CrossRatioValue, GeometryError> {
    let (af, bf) = fixed_points(f)?;
    let (ag, bg) = fixed_points(g)?;
    Ok(cross_ratio_points(&af, &bf, &ag, &bg))
}

pub fn theta_from_cross_ratio(c: f64) -> f64 {
    2.0 * (-c).sqrt().atan()
}

/// Axis distance for 0 < C, C != 1.
pub fn distance_from_cross_ratio(c: f64) -> f64 {
    let r = c.sqrt();
    ((r + 1.0) / (r - 1.0).abs()).ln()
}

pub fn configuration_points(
    alpha_f: &BoundaryPoint,
    beta_f: &BoundaryPoint,
    alpha_g: &BoundaryPoint,
    beta_g: &BoundaryPoint,
) -> PairGeometry {
    let cr = cross_ratio_points(alpha_f, beta_f, alpha_g, beta_g);
    let config = match cr {
        CrossRatioValue::Infinite => PairConfig::AlphaMeetsBeta,
        CrossRatioValue::Finite(c) => {
            if alpha_f.approx_eq(alpha_g) {
                PairConfig::SharedAlpha
            } else if beta_f.approx_eq(beta_g) {
                PairConfig::SharedBeta
            } else if c.abs() < CROSS_RATIO_EPS {
                if alpha_f.angular_distance(alpha_g) <= beta_f.angular_distance(beta_g) {
                    PairConfig::SharedAlpha
                } else {
                    PairConfig::SharedBeta
                }
            } else if (c - 1.0).abs() < CROSS_RATIO_EPS {
                PairConfig::ParabolicDegenerate
            } else if c < 0.0 {
                PairConfig::Crossing { theta: theta_from_cross_ratio(c) }
            } else {
                PairConfig::Disjoint { d: distance_from_cross_ratio(c), nested_attractors: c < 1.0 }
            }
        }
    };
    PairGeometry { cross_ratio: cr, config }
}

pub fn configuration(f: &MoebiusMap, g: &MoebiusMap) -> Result<PairGeometry, GeometryError> {
    let (af, bf) = fixed_points(f)?;
    let (ag, bg) = fixed_points(g)?;
    Ok(configuration_points(&af, &bf, &ag, &bg))
}

/// (C(f, g), C(f^-1, g)) for a pair with disjoint axes.
pub fn inverse_flip_identity_check(
    f: &MoebiusMap,
    g: &MoebiusMap,
) -> Result<(CrossRatioValue, CrossRatioValue), GeometryError> {
    let geo = configuration(f, g)?;
    geo.distance()?;
    Ok((geo.cross_ratio, cross_ratio(&f.inverse(), g)?))
}

pub fn axes_distance_from_cr(f: &MoebiusMap, g: &MoebiusMap) -> Result<f64, GeometryError> {
    let cr = cross_ratio(f, g)?;
    match cr {
        CrossRatioValue::Finite(c) if c > CROSS_RATIO_EPS && (c - 1.0).abs() > CROSS_RATIO_EPS => {
            Ok(distance_from_cross_ratio(c))
        }
        _ => Err(GeometryError::DegenerateCrossRatio(cr)),
    }
}

/// Arc-length coordinates along a directed geodesic.
///
/// The frame map sends 0 and infinity to the start and end of the line and
/// `i` to the point of the line nearest the disc centre. Position `u` is the
/// image of `i e^u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisFrame {
    map: MoebiusMap,
    inv: MoebiusMap,
}

impl AxisFrame {
    pub fn new(line: &Geodesic) -> Result<Self, GeometryError> {
        if line.from.approx_eq(&line.to) {
            return Err(GeometryError::SharedEndpoint);
        }
        let m = MoebiusMap::sending_zero_inf(&line.from, &line.to)?;
        let w = m.inverse().apply_interior(&PlanePoint::i());
        let r = w.x.hypot(w.y);
        let k = r.sqrt();
        let scale = MoebiusMap::with_sign(k, 0.0, 0.0, 1.0 / k);
        let map = m.compose(&scale);
        Ok(AxisFrame { map, inv: map.inverse() })
    }

    pub fn map(&self) -> &MoebiusMap {
        &self.map
    }

    /// Frame of the same line traversed backwards; positions change sign.
    pub fn reversed(&self) -> AxisFrame {
        let j = MoebiusMap::with_sign(0.0, -1.0, 1.0, 0.0);
        let map = self.map.compose(&j);
        AxisFrame { map, inv: map.inverse() }
    }

    pub fn point(&self, u: f64) -> PlanePoint {
        // apply the frame to i e^u without forming e^u
        let h = 0.5 * u;
        let z = PlanePoint { x: 0.0, y: 1.0 };
        let stretch = MoebiusMap::with_sign(h.exp(), 0.0, 0.0, (-h).exp());
        self.map.compose(&stretch).apply_interior(&z)
    }

    /// Position of the orthogonal projection of `z` onto the line.
    pub fn position(&self, z: &PlanePoint) -> f64 {
        let w = self.inv.apply_interior(z);
        w.x.hypot(w.y).ln()
    }

    fn boundary_at(&self, u: f64, sign: f64) -> BoundaryPoint {
        let h = 0.5 * u;
        let (x, y) = self.map.act((sign * h.exp(), (-h).exp()));
        BoundaryPoint::new(x, y).expect("nonzero")
    }

    /// Arc cut off by the perpendicular at `u`, on the side of the line's end.
    pub fn arc_toward_end(&self, u: f64) -> BoundaryArc {
        BoundaryArc::new(self.boundary_at(u, 1.0), self.boundary_at(u, -1.0))
            .expect("perpendicular endpoints are distinct")
    }

    /// Arc cut off by the perpendicular at `u`, on the side of the line's start.
    pub fn arc_toward_start(&self, u: f64) -> BoundaryArc {
        BoundaryArc::new(self.boundary_at(u, -1.0), self.boundary_at(u, 1.0))
            .expect("perpendicular endpoints are distinct")
    }

    /// Line endpoints expressed in frame coordinates (reals).
    pub(crate) fn local(&self, p: &BoundaryPoint) -> Option<f64> {
        self.inv.apply_boundary(p).to_real()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommonPerpendicular {
    /// Directed from the foot on the first line to the foot on the second.
    pub line: Geodesic,
    pub foot1: PlanePoint,
    pub foot2: PlanePoint,
    pub d: f64,
}

fn endpoints_distinct(l1: &Geodesic, l2: &Geodesic) -> bool {
    ![l2.from, l2.to].iter().any(|p| p.approx_eq(&l1.from) || p.approx_eq(&l1.to))
}

pub fn common_perpendicular(l1: &Geodesic, l2: &Geodesic) -> Result<CommonPerpendicular, GeometryError> {
    if !endpoints_distinct(l1, l2) {
        return Err(GeometryError::SharedEndpoint);
    }
    let frame = AxisFrame::new(l1)?;
    let p = frame.local(&l2.from).ok_or(GeometryError::SharedEndpoint)?;
    let q = frame.local(&l2.to).ok_or(GeometryError::SharedEndpoint)?;
    if p * q <= 0.0 {
        return Err(GeometryError::AxesCross);
    }
    let r = (p * q).sqrt();
    let foot1 = frame.point(r.ln());
    let frame2 = AxisFrame::new(l2)?;
    let foot2 = frame2.point(frame2.position(&foot1));
    let sign = p.signum();
    let m = frame.map();
    let line = Geodesic::new(
        m.apply_boundary(&BoundaryPoint::from_real(-sign * r)),
        m.apply_boundary(&BoundaryPoint::from_real(sign * r)),
    )?;
    Ok(CommonPerpendicular { line, foot1, foot2, d: hyperbolic_distance(&foot1, &foot2) })
}

/// Intersection point of two crossing geodesics.
pub fn crossing_point(l1: &Geodesic, l2: &Geodesic) -> Result<PlanePoint, GeometryError> {
    if !endpoints_distinct(l1, l2) {
        return Err(GeometryError::SharedEndpoint);
    }
    let frame = AxisFrame::new(l1)?;
    let p = frame.local(&l2.from).ok_or(GeometryError::SharedEndpoint)?;
    let q = frame.local(&l2.to).ok_or(GeometryError::SharedEndpoint)?;
    if p * q >= 0.0 {
        return Err(GeometryError::AxesDoNotCross);
    }
    Ok(frame.point((-p * q).sqrt().ln()))
}

/// Angle in [0, pi/2] between two crossing geodesics, or `None` if they do not meet.
pub fn intersection_angle(l1: &Geodesic, l2: &Geodesic) -> Option<f64> {
    let frame = AxisFrame::new(l1).ok()?;
    let p = frame.local(&l2.from)?;
    let q = frame.local(&l2.to)?;
    if p * q >= 0.0 {
        return None;
    }
    // semicircle centre c, radius rho meets the imaginary axis at angle acos(|c|/rho)
    let c = 0.5 * (p + q);
    let rho = 0.5 * (p - q).abs();
    Some((c.abs() / rho).min(1.0).acos())
}

/// Half-width, seen from a point of the axis, of the perpendicular at distance `s`.
pub fn perpendicular_half_width(s: f64) -> f64 {
    s.tanh().acos()
}

pub fn right_angle() -> f64 {
    0.5 * PI
}
