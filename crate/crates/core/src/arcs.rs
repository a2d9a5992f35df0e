//! Open arcs of the circle at infinity and Schottky-style containment checks.
//!
//! All comparisons happen in disc-model angles, so infinity is an ordinary point.

use std::f64::consts::PI;

use thiserror::Error;

use crate::moebius::{det, wrap_angle, BoundaryPoint, MoebiusMap};
use crate::tol::{ANGLE_EPS, CLEARANCE_SLACK};

const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArcError {
    #[error("arc endpoints coincide")]
    CoincidentEndpoints,
    #[error("arcs {0} and {1} have intersecting closures")]
    Overlap(usize, usize),
    #[error("arcs cover the whole circle")]
    FullCircle,
    #[error("an arc union needs at least one arc")]
    Empty,
}

/// Open arc swept counterclockwise from `start` to `end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryArc {
    start: BoundaryPoint,
    end: BoundaryPoint,
    sweep: f64,
}

impl BoundaryArc {
    pub fn new(start: BoundaryPoint, end: BoundaryPoint) -> Result<Self, ArcError> {
        let sweep = wrap_angle(end.disc_angle() - start.disc_angle());
        if sweep <= ANGLE_EPS || sweep >= TWO_PI - ANGLE_EPS {
            return Err(ArcError::CoincidentEndpoints);
        }
        Ok(BoundaryArc { start, end, sweep })
    }

    pub fn from_reals(start: f64, end: f64) -> Result<Self, ArcError> {
        Self::new(BoundaryPoint::from_real(start), BoundaryPoint::from_real(end))
    }

    pub fn from_angles(start: f64, end: f64) -> Result<Self, ArcError> {
        Self::new(BoundaryPoint::from_disc_angle(start), BoundaryPoint::from_disc_angle(end))
    }

    pub fn start(&self) -> BoundaryPoint {
        self.start
    }

    pub fn end(&self) -> BoundaryPoint {
        self.end
    }

    /// Angular length in (0, 2pi).
    pub fn sweep(&self) -> f64 {
        self.sweep
    }

    pub fn start_angle(&self) -> f64 {
        self.start.disc_angle()
    }

    pub fn end_angle(&self) -> f64 {
        self.end.disc_angle()
    }

    pub fn midpoint(&self) -> BoundaryPoint {
        BoundaryPoint::from_disc_angle(self.start_angle() + 0.5 * self.sweep)
    }

    fn offset(&self, p: &BoundaryPoint) -> f64 {
        wrap_angle(p.disc_angle() - self.start_angle())
    }

    /// Membership in the open arc.
    pub fn contains(&self, p: &BoundaryPoint) -> bool {
        let o = self.offset(p);
        o > ANGLE_EPS && o < self.sweep - ANGLE_EPS
    }

    /// Membership in the closed arc.
    pub fn contains_closure(&self, p: &BoundaryPoint) -> bool {
        let o = self.offset(p);
        o <= self.sweep + ANGLE_EPS || o >= TWO_PI - ANGLE_EPS
    }

    pub fn complement(&self) -> BoundaryArc {
        BoundaryArc { start: self.end, end: self.start, sweep: TWO_PI - self.sweep }
    }

    /// Image under an orientation-preserving map. The sweep is recomputed from
    /// the matrix so that very short images keep their length.
    pub fn image(&self, f: &MoebiusMap) -> BoundaryArc {
        // homogeneous angle runs opposite to the disc angle at half speed
        let half = 0.5 * self.sweep;
        let (px, py) = self.start.homogeneous();
        let (s, c) = half.sin_cos();
        let q = (c * px + s * py, -s * px + c * py);
        let mp = f.act((px, py));
        let mq = f.act(q);
        let np = mp.0.hypot(mp.1);
        let nq = mq.0.hypot(mq.1);
        let dot = (mp.0 * mq.0 + mp.1 * mq.1) / (np * nq);
        // cross(Mq, Mp) = det(M) sin(half) / (|Mp||Mq|)
        let cross = s / (np * nq);
        let half_img = cross.atan2(dot);
        BoundaryArc {
            start: BoundaryPoint::new(mp.0, mp.1).expect("nonzero"),
            end: f.apply_boundary(&self.end),
            sweep: 2.0 * half_img,
        }
    }

    /// Clearances (left, right) of `self` inside `outer`, or `None` if `self`
    /// is not contained in the closure of `outer`.
    pub fn clearance_in(&self, outer: &BoundaryArc) -> Option<(f64, f64)> {
        let mut o = wrap_angle(self.start_angle() - outer.start_angle());
        if o > TWO_PI - CLEARANCE_SLACK.max(4.0 * f64::EPSILON) {
            o -= TWO_PI;
        }
        let left = o;
        let right = outer.sweep - (o + self.sweep);
        if left < -CLEARANCE_SLACK || right < -CLEARANCE_SLACK {
            None
        } else {
            Some((left, right))
        }
    }

    /// Whether the closures of two arcs meet.
    pub fn closures_intersect(&self, other: &BoundaryArc) -> bool {
        self.contains_closure(&other.start) || other.contains_closure(&self.start)
    }
}

/// Finite union of open arcs with pairwise disjoint closures.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcUnion {
    arcs: Vec<BoundaryArc>,
}

impl ArcUnion {
    /// Rejects intersecting closures; sorts by start angle.
    pub fn new(mut arcs: Vec<BoundaryArc>) -> Result<Self, ArcError> {
        if arcs.is_empty() {
            return Err(ArcError::Empty);
        }
        arcs.sort_by(|a, b| a.start_angle().total_cmp(&b.start_angle()));
        for i in 0..arcs.len() {
            for j in (i + 1)..arcs.len() {
                if arcs[i].closures_intersect(&arcs[j]) {
                    return Err(ArcError::Overlap(i, j));
                }
            }
        }
        Ok(ArcUnion { arcs })
    }

    pub fn single(arc: BoundaryArc) -> Self {
        ArcUnion { arcs: vec![arc] }
    }

    /// Union of arbitrary arcs, merging any whose closures meet.
    pub fn merged(arcs: Vec<BoundaryArc>) -> Result<Self, ArcError> {
        if arcs.is_empty() {
            return Err(ArcError::Empty);
        }
        let mut out = arcs;
        loop {
            let mut hit = None;
            'scan: for i in 0..out.len() {
                for j in 0..out.len() {
                    if i != j && out[i].contains_closure(&out[j].start) {
                        hit = Some((i, j));
                        break 'scan;
                    }
                }
            }
            let Some((i, j)) = hit else { break };
            let (a, b) = (out[i], out[j]);
            let off = wrap_angle(b.start_angle() - a.start_angle());
            let off = if off > TWO_PI - ANGLE_EPS { 0.0 } else { off };
            let sweep = a.sweep.max(off + b.sweep);
            if sweep >= TWO_PI - ANGLE_EPS {
                return Err(ArcError::FullCircle);
            }
            let end = if off + b.sweep >= a.sweep { b.end } else { a.end };
            let m = BoundaryArc { start: a.start, end, sweep };
            let (lo, hi) = (i.min(j), i.max(j));
            out.remove(hi);
            out.remove(lo);
            out.push(m);
        }
        Self::new(out)
    }

    pub fn arcs(&self) -> &[BoundaryArc] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn contains(&self, p: &BoundaryPoint) -> bool {
        self.arcs.iter().any(|a| a.contains(p))
    }

    pub fn contains_closure(&self, p: &BoundaryPoint) -> bool {
        self.arcs.iter().any(|a| a.contains_closure(p))
    }
}

/// Smallest clearance of `inner` inside one of the arcs of `outer`, with a flag
/// telling whether some end is strictly clear. `None` if not contained.
fn arc_clearance(inner: &BoundaryArc, outer: &ArcUnion) -> Option<(f64, bool)> {
    outer.arcs.iter().find_map(|o| inner.clearance_in(o).map(|(l, r)| (l.min(r), l.max(r) > CLEARANCE_SLACK)))
}

pub fn strictly_inside(inner: &ArcUnion, outer: &ArcUnion, margin: f64) -> bool {
    inner.arcs.iter().all(|a| match arc_clearance(a, outer) {
        Some((c, proper)) => proper && c >= margin - CLEARANCE_SLACK,
        None => false,
    })
}

/// Result of pushing a union through every generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchottkyCheck {
    /// Every image lies in the closure of some arc and moves at least one end inward.
    pub contained: bool,
    /// Smallest endpoint clearance over all images (radians).
    pub min_clearance: f64,
}

impl SchottkyCheck {
    pub fn passes(&self, margin: f64) -> bool {
        self.contained && self.min_clearance >= margin - CLEARANCE_SLACK
    }
}

pub fn schottky_check(generators: &[MoebiusMap], union: &ArcUnion) -> SchottkyCheck {
    let mut contained = !generators.is_empty() && !union.is_empty();
    let mut min_clearance = f64::INFINITY;
    for f in generators {
        for arc in union.arcs() {
            match arc_clearance(&arc.image(f), union) {
                Some((c, proper)) => {
                    contained &= proper;
                    min_clearance = min_clearance.min(c);
                }
                None => {
                    contained = false;
                    min_clearance = f64::NEG_INFINITY;
                }
            }
        }
    }
    SchottkyCheck { contained, min_clearance }
}

pub fn verify_schottky(generators: &[MoebiusMap], union: &ArcUnion, margin: f64) -> bool {
    schottky_check(generators, union).passes(margin)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Labeled {
    point: BoundaryPoint,
    alpha: bool,
    beta: bool,
}

fn label_points(alphas: &[BoundaryPoint], betas: &[BoundaryPoint]) -> Vec<Labeled> {
    let mut pts: Vec<Labeled> = Vec::new();
    let tagged = alphas.iter().map(|p| (p, true)).chain(betas.iter().map(|p| (p, false)));
    for (p, is_alpha) in tagged {
        match pts.iter_mut().find(|q| q.point.approx_eq(p)) {
            Some(q) => {
                q.alpha |= is_alpha;
                q.beta |= !is_alpha;
            }
            None => pts.push(Labeled { point: *p, alpha: is_alpha, beta: !is_alpha }),
        }
    }
    pts.sort_by(|a, b| a.point.disc_angle().total_cmp(&b.point.disc_angle()));
    pts
}

/// True iff two complementary arcs separate the alphas from the betas.
/// A point that is both an alpha and a beta makes separation impossible.
pub fn can_partition_rank_one(alphas: &[BoundaryPoint], betas: &[BoundaryPoint]) -> bool {
    if alphas.is_empty() || betas.is_empty() {
        return false;
    }
    let pts = label_points(alphas, betas);
    if pts.iter().any(|p| p.alpha && p.beta) {
        return false;
    }
    let n = pts.len();
    let changes = (0..n).filter(|&i| pts[i].alpha != pts[(i + 1) % n].alpha).count();
    changes == 2
}

/// A separating arc for a rank-one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankOneSeparation {
    /// Contains every attracting point that is not also repelling.
    pub arc: BoundaryArc,
    /// Endpoints sit on points that are both attracting and repelling.
    pub weak: bool,
}

/// Harmonic conjugate of `x` with respect to `p` and `q`.
pub fn harmonic_conjugate(p: &BoundaryPoint, q: &BoundaryPoint, x: &BoundaryPoint) -> BoundaryPoint {
    let k1 = -det(x, q);
    let k2 = det(x, p);
    let (px, py) = p.homogeneous();
    let (qx, qy) = q.homogeneous();
    BoundaryPoint::new(k1 * px - k2 * qx, k1 * py - k2 * qy).expect("distinct points")
}

/// Finds an arc with all alphas inside and all betas outside its closure, or
/// with shared alpha/beta points allowed exactly at its endpoints.
pub fn rank_one_separation(alphas: &[BoundaryPoint], betas: &[BoundaryPoint]) -> Option<RankOneSeparation> {
    if alphas.is_empty() || betas.is_empty() {
        return None;
    }
    let pts = label_points(alphas, betas);
    let n = pts.len();
    if n < 2 {
        return None;
    }
    // even slot 2i is point i, odd slot 2i+1 is the gap after point i
    let slots = 2 * n;
    let usable = |s: usize| s % 2 == 1 || (pts[s / 2].alpha && pts[s / 2].beta);
    let side_ok = |from: usize, to: usize, want_alpha: bool| {
        let mut s = (from + 1) % slots;
        while s != to {
            if s % 2 == 0 {
                let p = &pts[s / 2];
                let ok = if want_alpha { p.alpha && !p.beta } else { p.beta && !p.alpha };
                if !ok {
                    return false;
                }
            }
            s = (s + 1) % slots;
        }
        true
    };
    let mut found = None;
    for strict_pass in [true, false] {
        for c1 in 0..slots {
            for c2 in 0..slots {
                if c1 == c2 || !usable(c1) || !usable(c2) {
                    continue;
                }
                if strict_pass && (c1 % 2 == 0 || c2 % 2 == 0) {
                    continue;
                }
                if side_ok(c1, c2, true) && side_ok(c2, c1, false) {
                    found = Some((c1, c2));
                    break;
                }
            }
            if found.is_some() {
                break;
            }
        }
        if found.is_some() {
            break;
        }
    }
    let (c1, c2) = found?;
    let gap_ends = |s: usize| (pts[s / 2].point, pts[(s / 2 + 1) % n].point);
    let cut = |s: usize, other: usize| -> BoundaryPoint {
        if s % 2 == 0 {
            return pts[s / 2].point;
        }
        let (lo, hi) = gap_ends(s);
        if other % 2 == 0 {
            harmonic_conjugate(&lo, &hi, &pts[other / 2].point)
        } else {
            let a = lo.disc_angle();
            let width = wrap_angle(hi.disc_angle() - a);
            let width = if n == 1 { TWO_PI } else { width };
            BoundaryPoint::from_disc_angle(a + 0.5 * width)
        }
    };
    let start = cut(c1, c2);
    let end = cut(c2, c1);
    let arc = BoundaryArc::new(start, end).ok()?;
    Some(RankOneSeparation { arc, weak: c1 % 2 == 0 || c2 % 2 == 0 })
}
