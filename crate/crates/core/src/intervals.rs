//! Explicit ping-pong intervals for pairs of generators and their assembly into
//! a single forward-invariant union.
//!
//! Every interval here is symmetric with respect to its owner: its endpoints
//! span a geodesic perpendicular to the owner's axis. Such an interval is
//! described by one number, the position along the owner's axis (see
//! [`AxisFrame`]) where that perpendicular stands. The A-side interval at
//! position `s` contains the attracting point, the B-side interval at `t`
//! contains the repelling point, and the owner maps the complement of B(t)
//! onto the closure of A(t + tau), so it maps it strictly into A(s) iff
//! `s - t < tau`.

use thiserror::Error;

use crate::arcs::{can_partition_rank_one, schottky_check, strictly_inside, ArcError, ArcUnion, BoundaryArc};
use crate::moebius::{BoundaryPoint, Geodesic, MoebiusMap, PlanePoint};
use crate::pair::{
    common_perpendicular, configuration_points, crossing_point, perpendicular_half_width, AxisFrame, CrossRatioValue,
    GeometryError, PairConfig,
};
use crate::tol::DEFAULT_MARGIN;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BuildError {
    #[error("generator {0} is not hyperbolic")]
    NotHyperbolic(usize),
    #[error("translation length {actual} does not exceed the required {required}")]
    ThresholdNotMet { required: f64, actual: f64 },
    #[error("axes are not disjoint with C > 1 (C = {0:?})")]
    AxesNotDisjointOutside(CrossRatioValue),
    #[error("axes do not cross")]
    AxesDoNotCross,
    #[error("no symmetric intervals exist: {0}")]
    Infeasible(String),
    #[error("maps do not share an attracting fixed point")]
    NoCommonAlpha,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Arc(#[from] ArcError),
}

/// Intervals around the attracting (`a`) and repelling (`b`) points of one generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricIntervalPair {
    pub a: BoundaryArc,
    pub b: BoundaryArc,
    pub owner: usize,
    /// Axis position of the perpendicular bounding `a`.
    pub a_position: f64,
    /// Axis position of the perpendicular bounding `b`.
    pub b_position: f64,
}

impl SymmetricIntervalPair {
    fn from_positions(frame: &AxisFrame, s: f64, t: f64, owner: usize) -> Self {
        SymmetricIntervalPair {
            a: frame.arc_toward_end(s),
            b: frame.arc_toward_start(t),
            owner,
            a_position: s,
            b_position: t,
        }
    }

    /// Whether `f` maps the complement of `b` strictly inside `a`.
    pub fn maps_into(&self, f: &MoebiusMap, margin: f64) -> bool {
        let img = ArcUnion::single(self.b.complement().image(f));
        strictly_inside(&img, &ArcUnion::single(self.a), margin)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Hyp {
    alpha: BoundaryPoint,
    beta: BoundaryPoint,
    tau: f64,
    frame: AxisFrame,
}

impl Hyp {
    fn new(f: &MoebiusMap, idx: usize) -> Result<Self, BuildError> {
        let (alpha, beta, tau) = f.hyperbolic_data().map_err(|_| BuildError::NotHyperbolic(idx))?;
        let frame = AxisFrame::new(&Geodesic { from: beta, to: alpha })?;
        Ok(Hyp { alpha, beta, tau, frame })
    }

    fn axis(&self) -> Geodesic {
        Geodesic { from: self.beta, to: self.alpha }
    }

    fn inverse(&self) -> Hyp {
        Hyp { alpha: self.beta, beta: self.alpha, tau: self.tau, frame: self.frame.reversed() }
    }
}

/// Perpendicular positions (A side, B side) on an owner's axis.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Pos {
    s: f64,
    t: f64,
}

impl Pos {
    fn flipped(self) -> Pos {
        Pos { s: -self.t, t: -self.s }
    }
}

/// How a pair of generators was handled.
#[derive(Debug, Clone, Copy, PartialEq)]
enum PairKind {
    Crossing,
    DisjointOutside,
    DisjointNested,
    SharedAlpha,
    SharedBeta,
    Coaxial,
}

fn gate(tau: f64, required: f64) -> Result<(), BuildError> {
    if tau > required + 1e-12 {
        Ok(())
    } else {
        Err(BuildError::ThresholdNotMet { required, actual: tau })
    }
}

/// Disjoint axes with C > 1, arcs at geometry-sized offsets from the feet of
/// the common perpendicular.
fn disjoint_positions(f: &Hyp, g: &Hyp, c: f64) -> Result<(Pos, Pos), BuildError> {
    let required = c.ln() + 1.5;
    gate(f.tau, required)?;
    gate(g.tau, required)?;
    let cp = common_perpendicular(&f.axis(), &g.axis())?;
    let bp = (1.0 / (0.5 * cp.d).sinh()).asinh();
    let offset = |tau: f64| bp + (0.5f64).min(0.5 * (0.5 * tau - bp));
    let (uf, ug) = (offset(f.tau), offset(g.tau));
    let pf = f.frame.position(&cp.foot1);
    let pg = g.frame.position(&cp.foot2);
    Ok((Pos { s: pf + uf, t: pf - uf }, Pos { s: pg + ug, t: pg - ug }))
}

/// Quantities of the crossing construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingDiagnostics {
    pub theta: f64,
    /// Angular room left once both minimal half-widths are used.
    pub slack: f64,
    /// The quarter-arc construction's condition sinh(tau) > M for both maps.
    pub quarter_arc_condition: bool,
    pub quarter_arc_bound: f64,
}

/// Crossing axes: arcs centred on the fixed-point directions seen from the
/// crossing point.
fn crossing_positions(f: &Hyp, g: &Hyp, c: f64) -> Result<(Pos, Pos, CrossingDiagnostics), BuildError> {
    let required = c.abs().ln().abs() + 1.5;
    gate(f.tau, required)?;
    gate(g.tau, required)?;
    let theta = 2.0 * (-c).sqrt().atan();
    let room = theta.min(std::f64::consts::PI - theta);
    let (wf, wg) = (perpendicular_half_width(0.5 * f.tau), perpendicular_half_width(0.5 * g.tau));
    let slack = room - wf - wg;
    let half = 0.5 * theta;
    let bound = (half.sin() + half.cos()) / (half.sin() * half.cos());
    let diag = CrossingDiagnostics {
        theta,
        slack,
        quarter_arc_condition: f.tau.sinh() > bound && g.tau.sinh() > bound,
        quarter_arc_bound: bound,
    };
    if slack <= 0.0 {
        return Err(BuildError::Infeasible(format!(
            "crossing angle {theta:.6} leaves no room for perpendiculars at half the translation lengths"
        )));
    }
    let sf = (wf + slack / 3.0).cos().atanh();
    let sg = (wg + slack / 3.0).cos().atanh();
    let o = crossing_point(&f.axis(), &g.axis())?;
    let cf = f.frame.position(&o);
    let cg = g.frame.position(&o);
    Ok((Pos { s: cf + sf, t: cf - sf }, Pos { s: cg + sg, t: cg - sg }, diag))
}

/// Orientation-preserving map sending `inf_to` to infinity and `p`, `q` to 0 and 1
/// in some order. Returns the map and the images of `p` and `q`.
fn normalizer(inf_to: &BoundaryPoint, p: &BoundaryPoint, q: &BoundaryPoint) -> (MoebiusMap, f64, f64) {
    let (x, y) = inf_to.homogeneous();
    let rot = MoebiusMap::with_sign(x, y, -y, x);
    let rp = rot.apply_boundary(p).to_real().unwrap_or(0.0);
    let rq = rot.apply_boundary(q).to_real().unwrap_or(0.0);
    let (lo, hi) = (rp.min(rq), rp.max(rq));
    let width = if hi - lo > 0.0 { hi - lo } else { 1.0 };
    let k = width.sqrt();
    let aff = MoebiusMap::with_sign(1.0 / k, -lo / k, 0.0, k);
    let n = aff.compose(&rot);
    (n, (rp - lo) / width, (rq - lo) / width)
}

/// Shared attracting point: per-generator symmetric arcs from the normalised
/// picture with the shared point at infinity and the repellers at 0 and 1.
fn shared_alpha_positions(f: &Hyp, g: &Hyp) -> Result<(Pos, Pos), BuildError> {
    let required = 5f64.ln();
    gate(f.tau, required)?;
    gate(g.tau, required)?;
    let (n, bf, bg) = normalizer(&f.alpha, &f.beta, &g.beta);
    let back = n.inverse();
    let at = |h: &Hyp, x: f64, y: f64| h.frame.position(&back.apply_interior(&PlanePoint { x, y }));
    Ok((Pos { s: at(f, bf, 2.5), t: at(f, bf, 0.5) }, Pos { s: at(g, bg, 2.5), t: at(g, bg, 0.5) }))
}

#[derive(Debug, Clone, PartialEq)]
struct PairBuild {
    kind: PairKind,
    f: Pos,
    g: Pos,
    crossing: Option<CrossingDiagnostics>,
}

fn build_pair(f: &Hyp, g: &Hyp) -> Result<PairBuild, BuildError> {
    let shared_alpha = f.alpha.approx_eq(&g.alpha);
    let shared_beta = f.beta.approx_eq(&g.beta);
    if shared_alpha && shared_beta {
        let dlt = 0.25 * f.tau.min(g.tau);
        let p = Pos { s: dlt, t: -dlt };
        // both frames describe the same line; measure g's positions in g's frame
        let mid_f = f.frame.point(0.0);
        let off = g.frame.position(&mid_f);
        return Ok(PairBuild { kind: PairKind::Coaxial, f: p, g: Pos { s: off + dlt, t: off - dlt }, crossing: None });
    }
    let geo = configuration_points(&f.alpha, &f.beta, &g.alpha, &g.beta);
    match geo.config {
        PairConfig::AlphaMeetsBeta => {
            Err(BuildError::PreconditionViolated("an attracting point coincides with a repelling point".into()))
        }
        PairConfig::ParabolicDegenerate => Err(BuildError::PreconditionViolated("cross ratio equals 1".into())),
        PairConfig::SharedAlpha => {
            let (pf, pg) = shared_alpha_positions(f, g)?;
            Ok(PairBuild { kind: PairKind::SharedAlpha, f: pf, g: pg, crossing: None })
        }
        PairConfig::SharedBeta => {
            let (pf, pg) = shared_alpha_positions(&f.inverse(), &g.inverse())?;
            Ok(PairBuild { kind: PairKind::SharedBeta, f: pf.flipped(), g: pg.flipped(), crossing: None })
        }
        PairConfig::Crossing { .. } => {
            let c = geo.cross_ratio.finite().expect("finite for crossing axes");
            let (pf, pg, diag) = crossing_positions(f, g, c)?;
            Ok(PairBuild { kind: PairKind::Crossing, f: pf, g: pg, crossing: Some(diag) })
        }
        PairConfig::Disjoint { nested_attractors, .. } => {
            let c = geo.cross_ratio.finite().expect("finite for disjoint axes");
            if nested_attractors {
                let (pf, pg) = disjoint_positions(&f.inverse(), g, 1.0 / c)?;
                Ok(PairBuild { kind: PairKind::DisjointNested, f: pf.flipped(), g: pg, crossing: None })
            } else {
                let (pf, pg) = disjoint_positions(f, g, c)?;
                Ok(PairBuild { kind: PairKind::DisjointOutside, f: pf, g: pg, crossing: None })
            }
        }
    }
}

fn check_pair_arcs(maps: [&MoebiusMap; 2], pairs: [&SymmetricIntervalPair; 2]) -> Result<(), BuildError> {
    let arcs = [pairs[0].a, pairs[0].b, pairs[1].a, pairs[1].b];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if arcs[i].closures_intersect(&arcs[j]) {
                return Err(BuildError::VerificationFailed(format!("interval closures {i} and {j} intersect")));
            }
        }
    }
    for k in 0..2 {
        if !pairs[k].maps_into(maps[k], DEFAULT_MARGIN) {
            return Err(BuildError::VerificationFailed(format!(
                "generator {k} does not map the complement of its B interval into its A interval"
            )));
        }
    }
    Ok(())
}

fn to_pairs(f: &Hyp, g: &Hyp, b: &PairBuild) -> (SymmetricIntervalPair, SymmetricIntervalPair) {
    (
        SymmetricIntervalPair::from_positions(&f.frame, b.f.s, b.f.t, 0),
        SymmetricIntervalPair::from_positions(&g.frame, b.g.s, b.g.t, 1),
    )
}

/// Four pairwise disjoint intervals for maps whose axes are disjoint with C > 1.
pub fn build_disjoint_pair_intervals(
    f: &MoebiusMap,
    g: &MoebiusMap,
) -> Result<(SymmetricIntervalPair, SymmetricIntervalPair), BuildError> {
    let (hf, hg) = (Hyp::new(f, 0)?, Hyp::new(g, 1)?);
    let geo = configuration_points(&hf.alpha, &hf.beta, &hg.alpha, &hg.beta);
    let c = match (geo.config, geo.cross_ratio) {
        (PairConfig::Disjoint { nested_attractors: false, .. }, CrossRatioValue::Finite(c)) => c,
        _ => return Err(BuildError::AxesNotDisjointOutside(geo.cross_ratio)),
    };
    let (pf, pg) = disjoint_positions(&hf, &hg, c)?;
    let build = PairBuild { kind: PairKind::DisjointOutside, f: pf, g: pg, crossing: None };
    let (a, b) = to_pairs(&hf, &hg, &build);
    check_pair_arcs([f, g], [&a, &b])?;
    Ok((a, b))
}

/// Four pairwise disjoint intervals for maps whose axes cross.
pub fn build_crossing_pair_intervals(
    f: &MoebiusMap,
    g: &MoebiusMap,
) -> Result<(SymmetricIntervalPair, SymmetricIntervalPair), BuildError> {
    crossing_pair_with_diagnostics(f, g).map(|(a, b, _)| (a, b))
}

pub fn crossing_pair_with_diagnostics(
    f: &MoebiusMap,
    g: &MoebiusMap,
) -> Result<(SymmetricIntervalPair, SymmetricIntervalPair, CrossingDiagnostics), BuildError> {
    let (hf, hg) = (Hyp::new(f, 0)?, Hyp::new(g, 1)?);
    let geo = configuration_points(&hf.alpha, &hf.beta, &hg.alpha, &hg.beta);
    let c = match (geo.config, geo.cross_ratio) {
        (PairConfig::Crossing { .. }, CrossRatioValue::Finite(c)) => c,
        _ => return Err(BuildError::AxesDoNotCross),
    };
    let (pf, pg, diag) = crossing_positions(&hf, &hg, c)?;
    let build = PairBuild { kind: PairKind::Crossing, f: pf, g: pg, crossing: Some(diag) };
    let (a, b) = to_pairs(&hf, &hg, &build);
    check_pair_arcs([f, g], [&a, &b])?;
    Ok((a, b, diag))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SharedAlphaIntervals {
    /// Neighbourhood of the shared attracting point.
    pub a: ArcUnion,
    /// Interval containing every repelling point.
    pub b: BoundaryArc,
    /// Sends the shared point to infinity and the repellers into [0, 1].
    pub conjugator: MoebiusMap,
}

/// Intervals for maps sharing their attracting point, each with tau > log 5.
pub fn build_shared_alpha_intervals(fs: &[MoebiusMap]) -> Result<SharedAlphaIntervals, BuildError> {
    if fs.is_empty() {
        return Err(BuildError::PreconditionViolated("no maps given".into()));
    }
    let mut data = Vec::with_capacity(fs.len());
    for (i, f) in fs.iter().enumerate() {
        data.push(f.hyperbolic_data().map_err(|_| BuildError::NotHyperbolic(i))?);
    }
    let alpha = data[0].0;
    if data.iter().any(|(a, _, _)| !a.approx_eq(&alpha)) {
        return Err(BuildError::NoCommonAlpha);
    }
    for (_, _, tau) in &data {
        gate(*tau, 5f64.ln())?;
    }
    let (x, y) = alpha.homogeneous();
    let rot = MoebiusMap::with_sign(x, y, -y, x);
    let reals: Vec<f64> = data.iter().map(|(_, b, _)| rot.apply_boundary(b).to_real().unwrap_or(0.0)).collect();
    let lo = reals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = reals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi - lo > 0.0 { hi - lo } else { 1.0 };
    let k = width.sqrt();
    let conjugator = MoebiusMap::with_sign(1.0 / k, -lo / k, 0.0, k).compose(&rot);
    let back = conjugator.inverse();
    let pull = |r: f64| back.apply_boundary(&BoundaryPoint::from_real(r));
    let a = ArcUnion::single(BoundaryArc::new(pull(2.5), pull(-1.5))?);
    let b = BoundaryArc::new(pull(-0.5), pull(1.5))?;
    let img_src = b.complement();
    for (i, f) in fs.iter().enumerate() {
        let img = ArcUnion::single(img_src.image(f));
        if !strictly_inside(&img, &a, DEFAULT_MARGIN) {
            return Err(BuildError::VerificationFailed(format!("map {i} does not send the complement of B into A")));
        }
    }
    Ok(SharedAlphaIntervals { a, b, conjugator })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharedKind {
    Attracting,
    Repelling,
}

/// Generators sharing one fixed point, with their common intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct SharedGroup {
    pub members: Vec<usize>,
    pub kind: SharedKind,
    /// Neighbourhood of the shared point and the interval holding the other
    /// fixed points (built from the inverses for a shared repeller); `None`
    /// when some member has tau <= log 5.
    pub intervals: Option<(ArcUnion, BoundaryArc)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalIntervalSystem {
    /// Innermost intervals per generator, indexed by generator.
    pub pairs: Vec<SymmetricIntervalPair>,
    pub shared_groups: Vec<SharedGroup>,
    /// Union of the A intervals; every generator maps it strictly into itself.
    pub union: ArcUnion,
    /// Constant of the global bound: twice the largest |log|C|| + 3/2 plus the
    /// largest axis distance.
    pub m_constant: f64,
    /// 4 max |log|C(C - 1)|| + 23.
    pub m_bound: f64,
    /// Smallest clearance seen by the final Schottky check.
    pub clearance: f64,
    pub notes: Vec<String>,
}

impl GlobalIntervalSystem {
    pub fn rank(&self) -> usize {
        self.union.len()
    }
}

fn shared_groups(hyps: &[Hyp], fs: &[MoebiusMap]) -> Vec<SharedGroup> {
    let mut out = Vec::new();
    for kind in [SharedKind::Attracting, SharedKind::Repelling] {
        let pick = |h: &Hyp| if kind == SharedKind::Attracting { h.alpha } else { h.beta };
        let mut seen = vec![false; hyps.len()];
        for i in 0..hyps.len() {
            if seen[i] {
                continue;
            }
            let members: Vec<usize> = (i..hyps.len()).filter(|&j| pick(&hyps[j]).approx_eq(&pick(&hyps[i]))).collect();
            for &j in &members {
                seen[j] = true;
            }
            if members.len() < 2 {
                continue;
            }
            let maps: Vec<MoebiusMap> =
                members.iter().map(|&j| if kind == SharedKind::Attracting { fs[j] } else { fs[j].inverse() }).collect();
            let intervals = build_shared_alpha_intervals(&maps).ok().map(|s| (s.a, s.b));
            out.push(SharedGroup { members, kind, intervals });
        }
    }
    out
}

/// Interval system for the whole generating set.
pub fn assemble_global(fs: &[MoebiusMap]) -> Result<GlobalIntervalSystem, BuildError> {
    if fs.is_empty() {
        return Err(BuildError::PreconditionViolated("no generators".into()));
    }
    let mut hyps = Vec::with_capacity(fs.len());
    for (i, f) in fs.iter().enumerate() {
        hyps.push(
            Hyp::new(f, i).map_err(|_| BuildError::PreconditionViolated(format!("generator {i} is not hyperbolic")))?,
        );
    }
    for (i, hi) in hyps.iter().enumerate() {
        for (j, hj) in hyps.iter().enumerate() {
            if hi.alpha.approx_eq(&hj.beta) {
                return Err(BuildError::PreconditionViolated(format!(
                    "attracting point of generator {i} equals repelling point of generator {j}"
                )));
            }
        }
    }
    let alphas: Vec<BoundaryPoint> = hyps.iter().map(|h| h.alpha).collect();
    let betas: Vec<BoundaryPoint> = hyps.iter().map(|h| h.beta).collect();
    if can_partition_rank_one(&alphas, &betas) {
        return Err(BuildError::PreconditionViolated("fixed points admit a rank-one partition".into()));
    }

    let n = hyps.len();
    let mut cands: Vec<Vec<Pos>> = vec![Vec::new(); n];
    let mut notes = Vec::new();
    let mut log_c_max = f64::NEG_INFINITY;
    let mut rho_max: f64 = 0.0;
    let mut bound_max = f64::NEG_INFINITY;
    let mut crossing_note = false;
    for i in 0..n {
        for j in (i + 1)..n {
            let build = build_pair(&hyps[i], &hyps[j]).map_err(|e| match e {
                BuildError::ThresholdNotMet { .. } | BuildError::Infeasible(_) => {
                    BuildError::PreconditionViolated(format!("pair ({i}, {j}): {e}"))
                }
                other => other,
            })?;
            cands[i].push(build.f);
            cands[j].push(build.g);
            if build.kind == PairKind::Crossing && !crossing_note {
                crossing_note = true;
                notes.push(
                    "crossing pairs gated at |log|C|| + 3/2; the stronger 5/2 gate appears in an intermediate proof step"
                        .to_string(),
                );
            }
            if let Some(diag) = build.crossing {
                if !diag.quarter_arc_condition {
                    notes.push(format!(
                        "pair ({i}, {j}): quarter-arc condition sinh(tau) > {:.6} fails; centred arcs used",
                        diag.quarter_arc_bound
                    ));
                }
            }
            let geo = configuration_points(&hyps[i].alpha, &hyps[i].beta, &hyps[j].alpha, &hyps[j].beta);
            if let Some(c) = geo.cross_ratio.finite() {
                if matches!(geo.config, PairConfig::Crossing { .. } | PairConfig::Disjoint { .. }) {
                    log_c_max = log_c_max.max(c.abs().ln().abs() + 1.5);
                    bound_max = bound_max.max((c * (c - 1.0)).abs().ln().abs());
                    if let PairConfig::Disjoint { d, .. } = geo.config {
                        rho_max = rho_max.max(d);
                    }
                }
            }
        }
    }
    let m_constant = if log_c_max.is_finite() { 2.0 * log_c_max + rho_max } else { 0.0 };
    let m_bound = 4.0 * bound_max.max(0.0) + 23.0;

    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let (s, t) = if cands[k].is_empty() {
            let dlt = 0.25 * hyps[k].tau;
            (dlt, -dlt)
        } else {
            (
                cands[k].iter().map(|p| p.s).fold(f64::NEG_INFINITY, f64::max),
                cands[k].iter().map(|p| p.t).fold(f64::INFINITY, f64::min),
            )
        };
        let spread = s - t;
        if !(spread < hyps[k].tau) {
            return Err(BuildError::VerificationFailed(format!(
                "generator {k}: innermost intervals are {spread:.6} apart, translation length {:.6}",
                hyps[k].tau
            )));
        }
        pairs.push(SymmetricIntervalPair::from_positions(&hyps[k].frame, s, t, k));
    }
    for j in 0..n {
        for k in 0..n {
            if j != k && pairs[j].a.closures_intersect(&pairs[k].b) {
                return Err(BuildError::VerificationFailed(format!(
                    "A interval of generator {j} meets B interval of generator {k}"
                )));
            }
        }
    }
    let union = ArcUnion::merged(pairs.iter().map(|p| p.a).collect())?;
    let check = schottky_check(fs, &union);
    if !check.passes(DEFAULT_MARGIN) {
        return Err(BuildError::VerificationFailed(format!(
            "union fails the Schottky check (clearance {:.3e})",
            check.min_clearance
        )));
    }
    if m_constant > m_bound {
        notes.push(format!("constant M = {m_constant:.6} exceeds the bound {m_bound:.6}"));
    }
    Ok(GlobalIntervalSystem {
        pairs,
        shared_groups: shared_groups(&hyps, fs),
        union,
        m_constant,
        m_bound,
        clearance: check.min_clearance,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcs::verify_schottky;
    use crate::fixtures;
    use crate::pair::intersection_angle;

    fn hyp(beta: f64, alpha: f64, tau: f64) -> MoebiusMap {
        MoebiusMap::from_axis_and_length(BoundaryPoint::from_real(beta), BoundaryPoint::from_real(alpha), tau).unwrap()
    }

    fn all_disjoint(arcs: &[BoundaryArc]) -> bool {
        (0..arcs.len()).all(|i| ((i + 1)..arcs.len()).all(|j| !arcs[i].closures_intersect(&arcs[j])))
    }

    fn symmetric(pair: &SymmetricIntervalPair, f: &MoebiusMap) -> bool {
        let axis = f.axis().unwrap();
        [pair.a, pair.b].iter().all(|arc| {
            let chord = Geodesic::new(arc.start(), arc.end()).unwrap();
            (intersection_angle(&axis, &chord).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-7
        })
    }

    #[test]
    fn disjoint_pair_c4() {
        let (f, g) = fixtures::disjoint_pair(4.0, 4f64.ln() + 1.6, 4f64.ln() + 1.6);
        let (a, b) = build_disjoint_pair_intervals(&f, &g).unwrap();
        assert!(all_disjoint(&[a.a, a.b, b.a, b.b]));
        assert!(a.maps_into(&f, 1e-7) && b.maps_into(&g, 1e-7));
        assert!(symmetric(&a, &f) && symmetric(&b, &g));
    }

    #[test]
    fn disjoint_pair_c9_and_gate() {
        let t = 9f64.ln() + 1.6;
        let (f, g) = fixtures::disjoint_pair(9.0, t, t);
        let (a, b) = build_disjoint_pair_intervals(&f, &g).unwrap();
        let u = ArcUnion::new(vec![a.a, b.a]).unwrap();
        assert!(verify_schottky(&[f, g], &u, 1e-7));
        let t = 9f64.ln() + 1.4;
        let (f, g) = fixtures::disjoint_pair(9.0, t, t);
        assert!(matches!(build_disjoint_pair_intervals(&f, &g), Err(BuildError::ThresholdNotMet { .. })));
        let (f, g) = fixtures::disjoint_pair(1.0 / 9.0, 5.0, 5.0);
        assert!(matches!(build_disjoint_pair_intervals(&f, &g), Err(BuildError::AxesNotDisjointOutside(_))));
    }

    #[test]
    fn crossing_pair_right_angle_is_infeasible_at_1_6() {
        let (f, g) = fixtures::crossing_pair(std::f64::consts::FRAC_PI_2, 1.6, 1.6);
        assert!(matches!(build_crossing_pair_intervals(&f, &g), Err(BuildError::Infeasible(_))));
        let (f, g) = fixtures::crossing_pair(std::f64::consts::FRAC_PI_2, 1.4, 1.4);
        assert!(matches!(build_crossing_pair_intervals(&f, &g), Err(BuildError::ThresholdNotMet { .. })));
        let (f, g) = fixtures::crossing_pair(std::f64::consts::FRAC_PI_2, 3.0, 3.0);
        let (a, b) = build_crossing_pair_intervals(&f, &g).unwrap();
        assert!(symmetric(&a, &f) && symmetric(&b, &g));
    }

    #[test]
    fn crossing_pair_third_of_pi() {
        let t = 3f64.ln() + 1.6;
        let (f, g) = fixtures::crossing_pair(std::f64::consts::FRAC_PI_3, t, t);
        let (a, b, diag) = crossing_pair_with_diagnostics(&f, &g).unwrap();
        assert!(all_disjoint(&[a.a, a.b, b.a, b.b]));
        assert!(a.maps_into(&f, 1e-7) && b.maps_into(&g, 1e-7));
        assert!(symmetric(&a, &f) && symmetric(&b, &g));
        // sinh(tau) > M is the same statement as cos(sigma) > cos(theta/2)
        let half = diag.theta / 2.0;
        let ang = std::f64::consts::FRAC_PI_2 - half;
        let cos_sigma = (t.sinh() - t.cosh() * ang.cos()) / (t.cosh() - t.sinh() * ang.cos());
        assert_eq!(diag.quarter_arc_condition, cos_sigma > half.cos());
    }

    #[test]
    fn shared_alpha_example() {
        let f1 = MoebiusMap::normalize(6.0, 0.0, 0.0, 1.0).unwrap();
        let f2 = MoebiusMap::normalize(6.0, -5.0, 0.0, 1.0).unwrap();
        let s = build_shared_alpha_intervals(&[f1, f2]).unwrap();
        let arc = s.a.arcs()[0];
        assert!((arc.start().to_real().unwrap() - 2.5).abs() < 1e-12);
        assert!((arc.end().to_real().unwrap() + 1.5).abs() < 1e-12);
        assert!((s.b.start().to_real().unwrap() + 0.5).abs() < 1e-12);
        for (f, x) in [(f1, 0.0), (f2, 1.0)] {
            let v = f.apply_boundary(&BoundaryPoint::from_real(1.5)).to_real().unwrap();
            assert!(v >= 2.5 + x);
        }
        let f5 = MoebiusMap::normalize(5.0, 0.0, 0.0, 1.0).unwrap();
        assert!(matches!(build_shared_alpha_intervals(&[f5]), Err(BuildError::ThresholdNotMet { .. })));
    }

    #[test]
    fn shared_alpha_conjugated() {
        let m = MoebiusMap::normalize(0.0, -1.0, 1.0, 0.3).unwrap();
        let f1 = MoebiusMap::normalize(6.0, 0.0, 0.0, 1.0).unwrap().conjugate(&m);
        let f2 = MoebiusMap::normalize(7.0, -6.0, 0.0, 1.0).unwrap().conjugate(&m);
        let s = build_shared_alpha_intervals(&[f1, f2]).unwrap();
        assert!(s.a.contains(&f1.axis().unwrap().to));
        let g = hyp(0.0, 3.0, 2.0);
        assert!(matches!(build_shared_alpha_intervals(&[f1, g]), Err(BuildError::NoCommonAlpha)));
    }

    #[test]
    fn five_axes_at_41() {
        let fs = fixtures::five_axes(41.0);
        let sys = assemble_global(&fs).unwrap();
        assert!(sys.rank() >= 2);
        assert!(verify_schottky(&fs, &sys.union, 1e-7));
        assert!(sys.m_constant <= sys.m_bound);
        for (k, p) in sys.pairs.iter().enumerate() {
            assert!(p.maps_into(&fs[k], 1e-7));
            assert!(symmetric(p, &fs[k]));
        }
    }

    #[test]
    fn two_generator_assembly_matches_pair_builder() {
        let (f, g) = fixtures::disjoint_pair(9.0, 5.0, 5.0);
        let sys = assemble_global(&[f, g]).unwrap();
        let (a, b) = build_disjoint_pair_intervals(&f, &g).unwrap();
        assert!((sys.pairs[0].a_position - a.a_position).abs() < 1e-12);
        assert!((sys.pairs[1].b_position - b.b_position).abs() < 1e-12);
        assert_eq!(sys.rank(), 2);
    }

    #[test]
    fn assembly_rejects_alpha_equal_beta() {
        let f = MoebiusMap::normalize(2.0, 0.0, 0.0, 1.0).unwrap();
        let g = MoebiusMap::normalize(0.5, 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(assemble_global(&[f, g]), Err(BuildError::PreconditionViolated(_))));
    }

    #[test]
    fn nested_pair_uses_inverse() {
        let (f, g) = fixtures::disjoint_pair(1.0 / 9.0, 6.0, 6.0);
        let (hf, hg) = (Hyp::new(&f, 0).unwrap(), Hyp::new(&g, 1).unwrap());
        let b = build_pair(&hf, &hg).unwrap();
        let (pf, pg) = to_pairs(&hf, &hg, &b);
        assert!(pf.maps_into(&f, 1e-7) && pg.maps_into(&g, 1e-7));
        assert!(!pf.a.closures_intersect(&pg.b) && !pg.a.closures_intersect(&pf.b));
    }
}
