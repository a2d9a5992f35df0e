//! Real Mobius maps acting on the upper half-plane, its boundary and the disc.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::tol::{ANGLE_EPS, IDENTITY_EPS, TRACE_EPS};

const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MoebiusError {
    #[error("determinant must be positive, got {0}")]
    NonPositiveDeterminant(f64),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("homogeneous coordinates (0, 0) do not define a point")]
    ZeroVector,
    #[error("point is not in the open upper half-plane (y = {0})")]
    NotInHalfPlane(f64),
    #[error("point is not inside the unit disc")]
    NotInDisc,
    #[error("map is not hyperbolic")]
    NotHyperbolic,
    #[error("geodesic endpoints coincide")]
    CoincidentEndpoints,
    #[error("translation length must be positive, got {0}")]
    NonPositiveLength(f64),
}

/// Reduce an angle into [0, 2pi).
pub fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TWO_PI);
    if r >= TWO_PI || r == 0.0 {
        0.0
    } else {
        r
    }
}

/// A point of the extended real line in canonical homogeneous form.
#[derive(Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    x: f64,
    y: f64,
}

impl BoundaryPoint {
    pub const INFINITY: BoundaryPoint = BoundaryPoint { x: 1.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Result<Self, MoebiusError> {
        if !x.is_finite() || !y.is_finite() {
            return Err(MoebiusError::NonFinite);
        }
        let n = x.hypot(y);
        if n == 0.0 {
            return Err(MoebiusError::ZeroVector);
        }
        let (mut x, mut y) = (x / n, y / n);
        if y < 0.0 || (y == 0.0 && x < 0.0) {
            x = -x;
            y = -y;
        }
        if y == 0.0 {
            x = 1.0;
        }
        Ok(BoundaryPoint { x, y })
    }

    /// Non-finite input maps to infinity.
    pub fn from_real(r: f64) -> Self {
        if r.is_finite() {
            BoundaryPoint::new(r, 1.0).expect("finite nonzero vector")
        } else {
            Self::INFINITY
        }
    }

    pub fn infinity() -> Self {
        Self::INFINITY
    }

    /// Point of the unit circle at the given angle, pulled back by the Cayley map.
    pub fn from_disc_angle(theta: f64) -> Self {
        let half = 0.5 * theta;
        BoundaryPoint::new(half.cos(), -half.sin()).expect("unit vector")
    }

    pub fn homogeneous(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    pub fn is_infinity(&self) -> bool {
        self.y == 0.0
    }

    /// Real value, or `None` at infinity.
    pub fn to_real(&self) -> Option<f64> {
        if self.y == 0.0 {
            None
        } else {
            Some(self.x / self.y)
        }
    }

    /// Angle of the Cayley image on the unit circle, in [0, 2pi).
    pub fn disc_angle(&self) -> f64 {
        wrap_angle(-2.0 * self.y.atan2(self.x))
    }

    pub fn to_disc(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.disc_angle())
    }

    /// Shortest angular distance on the unit circle.
    pub fn angular_distance(&self, other: &BoundaryPoint) -> f64 {
        // angle between homogeneous lines, doubled
        let cross = self.x * other.y - self.y * other.x;
        let dot = self.x * other.x + self.y * other.y;
        2.0 * cross.abs().atan2(dot.abs())
    }

    pub fn approx_eq(&self, other: &BoundaryPoint) -> bool {
        self.angular_distance(other) <= ANGLE_EPS
    }
}

impl fmt::Debug for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_real() {
            Some(r) => write!(f, "BoundaryPoint({r})"),
            None => write!(f, "BoundaryPoint(inf)"),
        }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_real() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "inf"),
        }
    }
}

/// det of two homogeneous points: x1*y2 - y1*x2 (equals p - q for finite reals).
pub fn det(p: &BoundaryPoint, q: &BoundaryPoint) -> f64 {
    p.x * q.y - p.y * q.x
}

/// Point of the open upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self, MoebiusError> {
        if !x.is_finite() || !y.is_finite() {
            return Err(MoebiusError::NonFinite);
        }
        if y <= 0.0 {
            return Err(MoebiusError::NotInHalfPlane(y));
        }
        Ok(PlanePoint { x, y })
    }

    pub fn i() -> Self {
        PlanePoint { x: 0.0, y: 1.0 }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

pub fn hyperbolic_distance(z: &PlanePoint, w: &PlanePoint) -> f64 {
    let e = (z.x - w.x).hypot(z.y - w.y);
    2.0 * (e / (2.0 * (z.y * w.y).sqrt())).asinh()
}

/// Cayley map z -> (z - i)/(z + i).
pub fn cayley_to_disc(z: &PlanePoint) -> Complex64 {
    let z = z.to_complex();
    (z - Complex64::i()) / (z + Complex64::i())
}

pub fn cayley_from_disc(w: Complex64) -> Result<PlanePoint, MoebiusError> {
    if w.norm() >= 1.0 {
        return Err(MoebiusError::NotInDisc);
    }
    let z = Complex64::i() * (Complex64::new(1.0, 0.0) + w) / (Complex64::new(1.0, 0.0) - w);
    PlanePoint::new(z.re, z.im)
}

/// Directed geodesic between two boundary points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    pub from: BoundaryPoint,
    pub to: BoundaryPoint,
}

impl Geodesic {
    pub fn new(from: BoundaryPoint, to: BoundaryPoint) -> Result<Self, MoebiusError> {
        if from.approx_eq(&to) {
            return Err(MoebiusError::CoincidentEndpoints);
        }
        Ok(Geodesic { from, to })
    }

    pub fn reversed(&self) -> Geodesic {
        Geodesic { from: self.to, to: self.from }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    Identity,
    Elliptic { rotation: f64 },
    Parabolic { fixed: BoundaryPoint },
    Hyperbolic { alpha: BoundaryPoint, beta: BoundaryPoint, tau: f64 },
}

impl Classification {
    pub fn kind(&self) -> ClassKind {
        match self {
            Classification::Identity => ClassKind::Identity,
            Classification::Elliptic { .. } => ClassKind::Elliptic,
            Classification::Parabolic { .. } => ClassKind::Parabolic,
            Classification::Hyperbolic { .. } => ClassKind::Hyperbolic,
        }
    }
}

/// Element of PSL(2, R) stored as a det-one matrix with canonical sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl MoebiusMap {
    pub fn identity() -> Self {
        MoebiusMap { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// Scale a raw matrix to det 1 and pick the canonical sign.
    pub fn normalize(a: f64, b: f64, c: f64, d: f64) -> Result<Self, MoebiusError> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(MoebiusError::NonFinite);
        }
        let det = a * d - b * c;
        if !(det > 0.0) {
            return Err(MoebiusError::NonPositiveDeterminant(det));
        }
        let s = det.sqrt();
        Ok(Self::with_sign(a / s, b / s, c / s, d / s))
    }

    /// Entries already satisfy det = 1; only the sign is fixed.
    pub(crate) fn with_sign(a: f64, b: f64, c: f64, d: f64) -> Self {
        let t = a + d;
        let flip = if t != 0.0 { t < 0.0 } else { [a, b, c].iter().find(|v| **v != 0.0).is_some_and(|v| *v < 0.0) };
        if flip {
            MoebiusMap { a: -a, b: -b, c: -c, d: -d }
        } else {
            MoebiusMap { a, b, c, d }
        }
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// `self` after `other`: z -> self(other(z)).
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        Self::with_sign(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    pub fn inverse(&self) -> MoebiusMap {
        Self::with_sign(self.d, -self.b, -self.c, self.a)
    }

    /// m after self after m^-1.
    pub fn conjugate(&self, m: &MoebiusMap) -> MoebiusMap {
        m.compose(self).compose(&m.inverse())
    }

    /// Integer power by repeated squaring; negative exponents use the inverse.
    pub fn pow(&self, k: i64) -> MoebiusMap {
        let mut base = if k < 0 { self.inverse() } else { *self };
        let mut e = k.unsigned_abs();
        let mut acc = MoebiusMap::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// Max-entry distance to the identity, minimised over the sign.
    pub fn identity_distance(&self) -> f64 {
        let plus = (self.a - 1.0).abs().max(self.b.abs()).max(self.c.abs()).max((self.d - 1.0).abs());
        let minus = (self.a + 1.0).abs().max(self.b.abs()).max(self.c.abs()).max((self.d + 1.0).abs());
        plus.min(minus)
    }

    pub fn max_entry_distance(&self, other: &MoebiusMap) -> f64 {
        let p = (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).abs())
            .max((self.d - other.d).abs());
        let m = (self.a + other.a)
            .abs()
            .max((self.b + other.b).abs())
            .max((self.c + other.c).abs())
            .max((self.d + other.d).abs());
        p.min(m)
    }

    /// Image of a homogeneous vector (not canonicalized).
    pub(crate) fn act(&self, v: (f64, f64)) -> (f64, f64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    pub fn apply_boundary(&self, p: &BoundaryPoint) -> BoundaryPoint {
        let (x, y) = self.act(p.homogeneous());
        BoundaryPoint::new(x, y).expect("invertible map sends nonzero vectors to nonzero vectors")
    }

    pub fn apply_interior(&self, z: &PlanePoint) -> PlanePoint {
        let z = z.to_complex();
        let w = (self.a * z + self.b) / (self.c * z + self.d);
        // det 1 keeps Im w > 0; guard against rounding at extreme scales
        PlanePoint { x: w.re, y: w.im.max(f64::MIN_POSITIVE) }
    }

    /// Derivative of the induced circle map at `p` (disc angle to disc angle).
    pub fn boundary_derivative(&self, p: &BoundaryPoint) -> f64 {
        let (x, y) = self.act(p.homogeneous());
        1.0 / (x * x + y * y)
    }

    pub fn classify(&self) -> Classification {
        if self.identity_distance() <= IDENTITY_EPS {
            return Classification::Identity;
        }
        let t = self.trace().abs();
        if (t - 2.0).abs() <= TRACE_EPS {
            let lambda = self.trace().signum();
            let v = self.eigenvector(lambda);
            return Classification::Parabolic { fixed: BoundaryPoint::new(v.0, v.1).expect("nonzero eigenvector") };
        }
        if t < 2.0 {
            return Classification::Elliptic { rotation: 2.0 * (t / 2.0).acos() };
        }
        let sign = self.trace().signum();
        let big = sign * 0.5 * (t + (t * t - 4.0).sqrt());
        let small = 1.0 / big;
        let v1 = self.eigenvector(big);
        let v2 = self.eigenvector(small);
        let p1 = BoundaryPoint::new(v1.0, v1.1).expect("nonzero eigenvector");
        let p2 = BoundaryPoint::new(v2.0, v2.1).expect("nonzero eigenvector");
        let (alpha, beta) =
            if self.boundary_derivative(&p1) <= self.boundary_derivative(&p2) { (p1, p2) } else { (p2, p1) };
        Classification::Hyperbolic { alpha, beta, tau: 2.0 * (t / 2.0).acosh() }
    }

    fn eigenvector(&self, lambda: f64) -> (f64, f64) {
        // exact fixed points at infinity and zero when the matrix is triangular
        if self.c == 0.0 && (lambda - self.a).abs() <= (lambda - self.d).abs() {
            return (1.0, 0.0);
        }
        if self.b == 0.0 && (lambda - self.d).abs() <= (lambda - self.a).abs() {
            return (0.0, 1.0);
        }
        let v1 = (self.b, lambda - self.a);
        let v2 = (lambda - self.d, self.c);
        if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) {
            v1
        } else {
            v2
        }
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self.classify(), Classification::Hyperbolic { .. })
    }

    /// (alpha, beta, tau) of a hyperbolic map.
    pub fn hyperbolic_data(&self) -> Result<(BoundaryPoint, BoundaryPoint, f64), MoebiusError> {
        match self.classify() {
            Classification::Hyperbolic { alpha, beta, tau } => Ok((alpha, beta, tau)),
            _ => Err(MoebiusError::NotHyperbolic),
        }
    }

    pub fn translation_length(&self) -> Result<f64, MoebiusError> {
        self.hyperbolic_data().map(|h| h.2)
    }

    pub fn translation_length_iterate_check(&self, k: u32) -> Result<f64, MoebiusError> {
        self.translation_length()?;
        self.pow(k as i64).translation_length()
    }

    /// Axis directed from the repelling to the attracting fixed point.
    pub fn axis(&self) -> Result<Geodesic, MoebiusError> {
        let (alpha, beta, _) = self.hyperbolic_data()?;
        Ok(Geodesic { from: beta, to: alpha })
    }

    /// Hyperbolic map with the given repelling/attracting points and translation length.
    pub fn from_axis_and_length(beta: BoundaryPoint, alpha: BoundaryPoint, tau: f64) -> Result<Self, MoebiusError> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(MoebiusError::NonPositiveLength(tau));
        }
        if alpha.approx_eq(&beta) {
            return Err(MoebiusError::CoincidentEndpoints);
        }
        // columns: image of infinity is alpha, image of 0 is beta
        let (p, q) = alpha.homogeneous();
        let (mut r, mut s) = beta.homogeneous();
        let mut det = p * s - q * r;
        if det < 0.0 {
            r = -r;
            s = -s;
            det = -det;
        }
        let l = (0.5 * tau).exp();
        let li = 1.0 / l;
        // M diag(l, 1/l) M^-1 with M^-1 = adj(M)/det
        let a = (l * p * s - li * r * q) / det;
        let b = (-l * p * r + li * r * p) / det;
        let c = (l * q * s - li * s * q) / det;
        let d = (-l * q * r + li * s * p) / det;
        Ok(Self::with_sign(a, b, c, d))
    }

    /// Map sending 0, infinity to the given points (orientation preserving, det 1).
    pub(crate) fn sending_zero_inf(zero_to: &BoundaryPoint, inf_to: &BoundaryPoint) -> Result<Self, MoebiusError> {
        let (p, q) = inf_to.homogeneous();
        let (mut r, mut s) = zero_to.homogeneous();
        let mut det = p * s - q * r;
        if det.abs() < 1e-300 {
            return Err(MoebiusError::CoincidentEndpoints);
        }
        if det < 0.0 {
            r = -r;
            s = -s;
            det = -det;
        }
        let k = det.sqrt();
        Ok(Self::with_sign(p / k, r / k, q / k, s / k))
    }
}

impl Default for MoebiusMap {
    fn default() -> Self {
        Self::identity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn normalize_examples() {
        let f = MoebiusMap::normalize(2.0, 0.0, 0.0, 1.0).unwrap();
        let e = f.entries();
        assert!(close(e[0], 2f64.sqrt(), 1e-15) && close(e[3], 1.0 / 2f64.sqrt(), 1e-15));
        assert!(close(f.trace(), 3.0 / 2f64.sqrt(), 1e-15));
        let m = MoebiusMap::normalize(-1.0, 0.0, 0.0, -1.0).unwrap();
        assert_eq!(m, MoebiusMap::identity());
        let g = MoebiusMap::normalize(0.5, 1.0, 0.0, 1.0).unwrap().entries();
        assert!(close(g[0], 0.5f64.sqrt(), 1e-15) && close(g[1], 2f64.sqrt(), 1e-15));
        assert!(matches!(MoebiusMap::normalize(0.0, 1.0, 1.0, 0.0), Err(MoebiusError::NonPositiveDeterminant(_))));
    }

    #[test]
    fn classify_examples() {
        let f = MoebiusMap::normalize(2.0, 0.0, 0.0, 1.0).unwrap();
        let (alpha, beta, tau) = f.hyperbolic_data().unwrap();
        assert!(alpha.is_infinity());
        assert_eq!(beta.to_real(), Some(0.0));
        assert!(close(tau, 2f64.ln(), 1e-12));

        let p = MoebiusMap::normalize(1.0, 1.0, 0.0, 1.0).unwrap();
        match p.classify() {
            Classification::Parabolic { fixed } => assert!(fixed.is_infinity()),
            other => panic!("{other:?}"),
        }

        let g = MoebiusMap::normalize(0.5, 1.0, 0.0, 1.0).unwrap();
        let (alpha, beta, tau) = g.hyperbolic_data().unwrap();
        assert!(close(alpha.to_real().unwrap(), 2.0, 1e-12));
        assert!(beta.is_infinity());
        assert!(close(tau, 2f64.ln(), 1e-12));

        let r = MoebiusMap::normalize(0.0, -1.0, 1.0, 0.0).unwrap();
        assert_eq!(r.classify().kind(), ClassKind::Elliptic);
    }

    #[test]
    fn boundary_action() {
        let f = MoebiusMap::normalize(2.0, 0.0, 0.0, 1.0).unwrap();
        assert!(f.apply_boundary(&BoundaryPoint::INFINITY).is_infinity());
        let g = MoebiusMap::normalize(0.5, 1.0, 0.0, 1.0).unwrap();
        let img = g.apply_boundary(&BoundaryPoint::from_real(1.0));
        assert!(close(img.to_real().unwrap(), 1.5, 1e-15));
        let s = MoebiusMap::normalize(0.0, -1.0, 1.0, 0.0).unwrap();
        assert!(s.apply_boundary(&BoundaryPoint::from_real(0.0)).is_infinity());
    }

    #[test]
    fn powers_and_iterates() {
        let f = MoebiusMap::normalize(2.0, 0.0, 0.0, 1.0).unwrap();
        assert!(close(f.translation_length_iterate_check(3).unwrap(), 3.0 * 2f64.ln(), 1e-12));
        let h = MoebiusMap::from_axis_and_length(BoundaryPoint::from_real(-0.3), BoundaryPoint::from_real(4.0), 0.1)
            .unwrap();
        assert!(close(h.translation_length_iterate_check(10).unwrap(), 1.0, 1e-9));
        assert!(f.compose(&f.inverse()).classify() == Classification::Identity);
    }

    #[test]
    fn g_n_f_n_is_near_translation() {
        let f = MoebiusMap::normalize(2.0, 0.0, 0.0, 1.0).unwrap();
        let g = MoebiusMap::normalize(0.5, 1.0, 0.0, 1.0).unwrap();
        for n in 1..=20 {
            let w = g.pow(n).compose(&f.pow(n)).entries();
            let shift = 2.0 - 2f64.powi(1 - n as i32);
            assert!(close(w[0], 1.0, 1e-12) && close(w[2], 0.0, 1e-12) && close(w[3], 1.0, 1e-12));
            assert!(close(w[1], shift, 1e-12), "n={n}: {}", w[1]);
        }
    }

    #[test]
    fn axis_constructor() {
        let f = MoebiusMap::from_axis_and_length(BoundaryPoint::from_real(0.0), BoundaryPoint::INFINITY, 2f64.ln())
            .unwrap();
        let e = f.entries();
        assert!(close(e[0] / e[3], 2.0, 1e-12) && e[1].abs() < 1e-15 && e[2].abs() < 1e-15);

        let t = 1.3;
        let g =
            MoebiusMap::from_axis_and_length(BoundaryPoint::from_real(-1.0), BoundaryPoint::from_real(1.0), t).unwrap();
        assert!(close(g.trace(), 2.0 * (t / 2.0).cosh(), 1e-12));
        let ax = g.axis().unwrap();
        assert!(close(ax.from.to_real().unwrap(), -1.0, 1e-12));
        assert!(close(ax.to.to_real().unwrap(), 1.0, 1e-12));
        assert!(MoebiusMap::from_axis_and_length(ax.to, ax.to, 1.0).is_err());
    }

    #[test]
    fn cayley_examples() {
        let w = cayley_to_disc(&PlanePoint::i());
        assert!(w.norm() < 1e-15);
        assert!(close(BoundaryPoint::INFINITY.disc_angle(), 0.0, 1e-15));
        assert!(close(BoundaryPoint::from_real(0.0).disc_angle(), PI, 1e-15));
        let back = cayley_from_disc(Complex64::new(0.3, -0.2)).unwrap();
        assert!((cayley_to_disc(&back) - Complex64::new(0.3, -0.2)).norm() < 1e-14);
        for k in 0..16 {
            let th = k as f64 * 0.39;
            assert!(close(BoundaryPoint::from_disc_angle(th).disc_angle(), wrap_angle(th), 1e-14));
        }
    }

    #[test]
    fn distance_examples() {
        let z = PlanePoint::new(0.0, 1.0).unwrap();
        let w = PlanePoint::new(0.0, 2.0).unwrap();
        assert!(close(hyperbolic_distance(&z, &w), 2f64.ln(), 1e-15));
        assert_eq!(hyperbolic_distance(&z, &z), 0.0);
    }

    #[test]
    fn huge_translation_length_keeps_fixed_points() {
        let beta = BoundaryPoint::from_disc_angle(2.4);
        let alpha = BoundaryPoint::from_disc_angle(5.1);
        let f = MoebiusMap::from_axis_and_length(beta, alpha, 41.0).unwrap();
        let (a, b, tau) = f.hyperbolic_data().unwrap();
        assert!(a.angular_distance(&alpha) < 1e-12);
        assert!(b.angular_distance(&beta) < 1e-12);
        assert!(close(tau, 41.0, 1e-9));
    }
}
