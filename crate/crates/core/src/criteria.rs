//! Threshold tests deciding semidiscreteness, and the certificates they emit.

use std::f64::consts::PI;

use thiserror::Error;

use crate::arcs::{rank_one_separation, schottky_check, ArcUnion, BoundaryArc};
use crate::intervals::{assemble_global, BuildError, GlobalIntervalSystem};
use crate::moebius::{BoundaryPoint, MoebiusMap};
use crate::pair::{configuration, configuration_points, CrossRatioValue, GeometryError, PairConfig};
use crate::tol::{CROSS_RATIO_EPS, DEFAULT_MARGIN, ELLIPTIC_EPS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CriteriaError {
    #[error("generator {0} is not hyperbolic")]
    NotHyperbolic(usize),
    #[error("cross ratio {0:?} is outside the range this test needs")]
    CrossRatioOutOfRange(CrossRatioValue),
    #[error("axes are not disjoint")]
    AxesNotDisjoint,
    #[error("axes do not cross")]
    AxesDoNotCross,
    #[error("translation length {actual} is not below {required}")]
    ThresholdNotMet { required: f64, actual: f64 },
    #[error("no elliptic f^m g^n with m, n <= {bound}")]
    SearchExhausted { bound: u32 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// h(x, y) = cosh d sinh x sinh y - cosh x cosh y.
pub fn h_function(x: f64, y: f64, d: f64) -> f64 {
    d.cosh() * x.sinh() * y.sinh() - x.cosh() * y.cosh()
}

/// Level-set constants of `h` on the diagonal for axis distance `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HRegion {
    pub d: f64,
    /// h(a, a) = -7/9
    pub a: f64,
    /// h(b, b) = -1/2
    pub b: f64,
    /// h(b', b') = 1
    pub b_prime: f64,
}

impl HRegion {
    pub fn new(d: f64) -> Result<Self, CriteriaError> {
        if !(d > 0.0) || !d.is_finite() {
            return Err(CriteriaError::PreconditionViolated(format!("axis distance {d} must be positive")));
        }
        let s = (0.5 * d).sinh();
        Ok(HRegion { d, a: (1.0 / (3.0 * s)).asinh(), b: (1.0 / (2.0 * s)).asinh(), b_prime: (1.0 / s).asinh() })
    }

    pub fn h(&self, x: f64, y: f64) -> f64 {
        h_function(x, y, self.d)
    }

    /// Whether h(x, y) lies in (-1, -1/2), where f^m g^n is elliptic.
    pub fn in_elliptic_band(&self, x: f64, y: f64) -> bool {
        let v = self.h(x, y);
        v > -1.0 && v < -0.5
    }
}

/// One unordered pair of generators as seen by the global thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub cross_ratio: CrossRatioValue,
    /// C > 1: counts towards the lower threshold.
    pub disjoint_outside: bool,
    /// C finite and nonzero: counts towards the upper threshold.
    pub counts_for_upper: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Thresholds {
    /// Below this every semigroup in scope fails to be semidiscrete.
    pub lower: f64,
    /// Above this the semigroup is Schottky.
    pub upper: f64,
    pub pairs: Vec<PairEntry>,
}

impl Thresholds {
    pub fn from_cross_ratios(table: &[(usize, usize, CrossRatioValue)]) -> Self {
        let mut lower_min: f64 = 1.0;
        let mut upper_max: f64 = 0.0;
        let mut pairs = Vec::with_capacity(table.len());
        for &(i, j, cr) in table {
            let (outside, counts) = match cr {
                CrossRatioValue::Finite(c) => (c > 1.0 + CROSS_RATIO_EPS, c.abs() > CROSS_RATIO_EPS),
                CrossRatioValue::Infinite => (false, false),
            };
            if let CrossRatioValue::Finite(c) = cr {
                if outside {
                    lower_min = lower_min.min((c - 1.0) / (c + 3.0));
                }
                if counts {
                    upper_max = upper_max.max((c * (c - 1.0)).abs().ln().abs());
                }
            }
            pairs.push(PairEntry { i, j, cross_ratio: cr, disjoint_outside: outside, counts_for_upper: counts });
        }
        Thresholds { lower: lower_min / 5.0, upper: 4.0 * upper_max + 23.0, pairs }
    }

    pub fn from_values(table: &[(usize, usize, f64)]) -> Self {
        let t: Vec<_> = table.iter().map(|&(i, j, c)| (i, j, CrossRatioValue::Finite(c))).collect();
        Self::from_cross_ratios(&t)
    }
}

fn hyperbolic_all(fs: &[MoebiusMap]) -> Result<Vec<(BoundaryPoint, BoundaryPoint, f64)>, CriteriaError> {
    fs.iter().enumerate().map(|(i, f)| f.hyperbolic_data().map_err(|_| CriteriaError::NotHyperbolic(i))).collect()
}

pub fn compute_thresholds(fs: &[MoebiusMap]) -> Result<Thresholds, CriteriaError> {
    let data = hyperbolic_all(fs)?;
    let mut table = Vec::new();
    for i in 0..data.len() {
        for j in (i + 1)..data.len() {
            let geo = configuration_points(&data[i].0, &data[i].1, &data[j].0, &data[j].1);
            let cr = match geo.config {
                PairConfig::SharedAlpha | PairConfig::SharedBeta => CrossRatioValue::Finite(0.0),
                _ => geo.cross_ratio,
            };
            table.push((i, j, cr));
        }
    }
    Ok(Thresholds::from_cross_ratios(&table))
}

/// Returns (|tr(f o g)|/2 from the matrices, the same value from the axis geometry).
pub fn pair_trace_identity_check(f: &MoebiusMap, g: &MoebiusMap) -> Result<(f64, f64), CriteriaError> {
    let geo = configuration(f, g)?;
    let (d, nested) = match geo.config {
        PairConfig::Disjoint { d, nested_attractors } => (d, nested_attractors),
        _ => return Err(CriteriaError::AxesNotDisjoint),
    };
    let (x, y) = (0.5 * f.translation_length().unwrap_or(0.0), 0.5 * g.translation_length().unwrap_or(0.0));
    let lhs = 0.5 * f.compose(g).trace().abs();
    let rhs = if nested { d.cosh() * x.sinh() * y.sinh() + x.cosh() * y.cosh() } else { h_function(x, y, d).abs() };
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticWitness {
    pub m: u32,
    pub n: u32,
    /// h(m tau_f / 2, n tau_g / 2, d)
    pub h: f64,
    /// Trace of f^m o g^n computed from the matrices.
    pub trace: f64,
}

fn disjoint_outside(f: &MoebiusMap, g: &MoebiusMap) -> Result<(f64, f64), CriteriaError> {
    let geo = configuration(f, g)?;
    match (geo.config, geo.cross_ratio) {
        (PairConfig::Disjoint { d, nested_attractors: false }, CrossRatioValue::Finite(c)) => Ok((c, d)),
        _ => Err(CriteriaError::CrossRatioOutOfRange(geo.cross_ratio)),
    }
}

/// Exponents m, n with f^m o g^n elliptic, for a C > 1 pair of short maps.
///
/// Prefers the lattice point nearest the centre of the square [a, b]^2, then
/// falls back to the smallest m + n whose h value lies in the elliptic band.
pub fn elliptic_witness_disjoint(f: &MoebiusMap, g: &MoebiusMap) -> Result<EllipticWitness, CriteriaError> {
    let (_, d) = disjoint_outside(f, g)?;
    let tf = f.translation_length().map_err(|_| CriteriaError::NotHyperbolic(0))?;
    let tg = g.translation_length().map_err(|_| CriteriaError::NotHyperbolic(1))?;
    let region = HRegion::new(d)?;
    let (xf, xg) = (0.5 * tf, 0.5 * tg);
    let bound = 64u32.max((4.0 * region.b / tf.min(tg)).ceil().min(1e6) as u32);
    let attempt = |m: u32, n: u32| -> Option<EllipticWitness> {
        let x = m as f64 * xf;
        let y = n as f64 * xg;
        if !region.in_elliptic_band(x, y) {
            return None;
        }
        let trace = f.pow(m as i64).compose(&g.pow(n as i64)).trace();
        (trace.abs() < 2.0 - ELLIPTIC_EPS).then_some(EllipticWitness { m, n, h: region.h(x, y), trace })
    };
    let centre = 0.5 * (region.a + region.b);
    let m0 = ((centre / xf).round() as u32).max(1);
    let n0 = ((centre / xg).round() as u32).max(1);
    if m0 <= bound && n0 <= bound {
        if let Some(w) = attempt(m0, n0) {
            return Ok(w);
        }
    }
    for s in 2..=(2 * bound) {
        for m in 1..s {
            let n = s - m;
            if m > bound || n > bound {
                continue;
            }
            if let Some(w) = attempt(m, n) {
                return Ok(w);
            }
        }
    }
    Err(CriteriaError::SearchExhausted { bound })
}

/// Evidence that a semigroup is not semidiscrete.
#[derive(Debug, Clone, PartialEq)]
pub enum NotSemidiscreteEvidence {
    /// An elliptic word f_i^m f_j^n.
    Elliptic { pair: (usize, usize), word: Vec<(usize, u32)>, trace: f64, h: f64 },
    /// Two short maps with crossing axes whose forward limit set contains the
    /// repelling point of a third generator.
    TripleCrossing {
        pair: (usize, usize),
        third: usize,
        limit_arc: BoundaryArc,
        repeller: BoundaryPoint,
        /// sinh(tau_f/2) sinh(tau_g/2) sin(theta)
        jorgensen_value: f64,
        /// cos(3 pi / 7)
        jorgensen_bound: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InconclusiveReport {
    pub taus: Vec<f64>,
    pub thresholds: Option<Thresholds>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    NotSemidiscrete(NotSemidiscreteEvidence),
    SemidiscreteInverseFree(Box<GlobalIntervalSystem>),
    /// One arc around every attracting point, mapped into itself by every generator.
    RankOneSchottky {
        union: ArcUnion,
        /// The arc ends on points that are both attracting and repelling; checked at margin 0.
        weak: bool,
        clearance: f64,
    },
    Inconclusive(InconclusiveReport),
}

impl Certificate {
    pub fn is_definitive(&self) -> bool {
        !matches!(self, Certificate::Inconclusive(_))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Certificate::NotSemidiscrete(_) => "not_semidiscrete",
            Certificate::SemidiscreteInverseFree(_) => "semidiscrete_inverse_free",
            Certificate::RankOneSchottky { .. } => "rank_one_schottky",
            Certificate::Inconclusive(_) => "inconclusive",
        }
    }
}

/// Decision test for two maps with disjoint axes and C > 1.
pub fn two_gen_disjoint_test(f: &MoebiusMap, g: &MoebiusMap) -> Result<Certificate, CriteriaError> {
    let (c, _) = disjoint_outside(f, g)?;
    let tf = f.translation_length().map_err(|_| CriteriaError::NotHyperbolic(0))?;
    let tg = g.translation_length().map_err(|_| CriteriaError::NotHyperbolic(1))?;
    let low = (c - 1.0) / (5.0 * (c + 3.0));
    let high = c.ln() + 1.5;
    if tf < low && tg < low {
        let w = elliptic_witness_disjoint(f, g)?;
        return Ok(Certificate::NotSemidiscrete(NotSemidiscreteEvidence::Elliptic {
            pair: (0, 1),
            word: vec![(0, w.m), (1, w.n)],
            trace: w.trace,
            h: w.h,
        }));
    }
    if tf > high && tg > high {
        let sys = assemble_global(&[*f, *g])?;
        return Ok(Certificate::SemidiscreteInverseFree(Box::new(sys)));
    }
    Ok(Certificate::Inconclusive(InconclusiveReport {
        taus: vec![tf, tg],
        thresholds: Some(Thresholds::from_cross_ratios(&[(0, 1, CrossRatioValue::Finite(c))])),
        reason: format!("translation lengths lie between {low:.6} and {high:.6}"),
    }))
}

/// Largest sinh(tau) for which f(I) and g(I) still cover I at crossing angle theta.
pub fn limit_interval_epsilon(theta: f64) -> f64 {
    let h = 0.5 * theta;
    (h.cos() - theta.cos()) / (h.sin() * theta.sin())
}

fn crossing_data(f: &MoebiusMap, g: &MoebiusMap) -> Result<(f64, f64, f64), CriteriaError> {
    let geo = configuration(f, g)?;
    let theta = match geo.config {
        PairConfig::Crossing { theta } => theta,
        _ => return Err(CriteriaError::AxesDoNotCross),
    };
    let tf = f.translation_length().map_err(|_| CriteriaError::NotHyperbolic(0))?;
    let tg = g.translation_length().map_err(|_| CriteriaError::NotHyperbolic(1))?;
    Ok((theta, tf, tg))
}

/// The forward limit set of two short maps with crossing axes: the arc
/// between the attracting points that avoids both repelling points.
pub fn crossing_limit_interval(f: &MoebiusMap, g: &MoebiusMap) -> Result<BoundaryArc, CriteriaError> {
    let (theta, tf, tg) = crossing_data(f, g)?;
    for t in [tf, tg] {
        if !(t < 0.2) {
            return Err(CriteriaError::ThresholdNotMet { required: 0.2, actual: t });
        }
    }
    let eps = limit_interval_epsilon(theta);
    for t in [tf, tg] {
        if !(t.sinh() < eps) {
            return Err(CriteriaError::ThresholdNotMet { required: eps.asinh(), actual: t });
        }
    }
    let (af, bf, _) = f.hyperbolic_data().expect("checked");
    let (ag, bg, _) = g.hyperbolic_data().expect("checked");
    for arc in [BoundaryArc::new(af, ag), BoundaryArc::new(ag, af)].into_iter().flatten() {
        if !arc.contains_closure(&bf) && !arc.contains_closure(&bg) {
            return Ok(arc);
        }
    }
    Err(CriteriaError::AxesDoNotCross)
}

pub fn jorgensen_bound() -> f64 {
    (3.0 * PI / 7.0).cos()
}

fn triple_evidence(fs: [&MoebiusMap; 3], idx: (usize, usize, usize)) -> Result<NotSemidiscreteEvidence, CriteriaError> {
    let (f, g, h) = (fs[0], fs[1], fs[2]);
    let (theta, tf, tg) = crossing_data(f, g).map_err(|e| match e {
        CriteriaError::AxesDoNotCross => CriteriaError::PreconditionViolated("axes do not cross".into()),
        other => other,
    })?;
    let arc = crossing_limit_interval(f, g)
        .map_err(|e| CriteriaError::PreconditionViolated(format!("no limit interval: {e}")))?;
    let (_, repeller, _) =
        h.hyperbolic_data().map_err(|_| CriteriaError::PreconditionViolated("third map is not hyperbolic".into()))?;
    if !arc.contains(&repeller) {
        return Err(CriteriaError::PreconditionViolated(
            "repelling point of the third map is outside the limit interval".into(),
        ));
    }
    let value = (0.5 * tf).sinh() * (0.5 * tg).sinh() * theta.sin();
    let bound = jorgensen_bound();
    if !(value < bound) {
        return Err(CriteriaError::PreconditionViolated(format!("sinh sinh sin = {value} is not below cos(3pi/7)")));
    }
    Ok(NotSemidiscreteEvidence::TripleCrossing {
        pair: (idx.0, idx.1),
        third: idx.2,
        limit_arc: arc,
        repeller,
        jorgensen_value: value,
        jorgensen_bound: bound,
    })
}

/// Two short maps with crossing axes and a third map repelling from inside
/// their limit interval generate a semigroup that is not semidiscrete.
pub fn triple_crossing_test(f: &MoebiusMap, g: &MoebiusMap, hgen: &MoebiusMap) -> Result<Certificate, CriteriaError> {
    triple_evidence([f, g, hgen], (0, 1, 2)).map(Certificate::NotSemidiscrete)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    /// Clearance required of interval certificates, in disc radians.
    pub margin: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { margin: DEFAULT_MARGIN }
    }
}

pub fn certify(fs: &[MoebiusMap]) -> Result<Certificate, CriteriaError> {
    certify_with(fs, &CertifyOptions::default())
}

/// Scan pairs (lexicographically) for a sub-semigroup meeting its own
/// non-semidiscreteness criterion.
fn scan_not_semidiscrete(fs: &[MoebiusMap], taus: &[f64]) -> Option<NotSemidiscreteEvidence> {
    let n = fs.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let Ok((c, _)) = disjoint_outside(&fs[i], &fs[j]) else { continue };
            let low = (c - 1.0) / (5.0 * (c + 3.0));
            if taus[i] < low && taus[j] < low {
                if let Ok(w) = elliptic_witness_disjoint(&fs[i], &fs[j]) {
                    return Some(NotSemidiscreteEvidence::Elliptic {
                        pair: (i, j),
                        word: vec![(i, w.m), (j, w.n)],
                        trace: w.trace,
                        h: w.h,
                    });
                }
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !(taus[i] < 0.2 && taus[j] < 0.2) {
                continue;
            }
            for k in (0..n).filter(|&k| k != i && k != j) {
                if let Ok(e) = triple_evidence([&fs[i], &fs[j], &fs[k]], (i, j, k)) {
                    return Some(e);
                }
            }
        }
    }
    None
}

pub fn certify_with(fs: &[MoebiusMap], opts: &CertifyOptions) -> Result<Certificate, CriteriaError> {
    if fs.is_empty() {
        return Err(CriteriaError::PreconditionViolated("no generators".into()));
    }
    let data = hyperbolic_all(fs).map_err(|e| match e {
        CriteriaError::NotHyperbolic(i) => {
            CriteriaError::PreconditionViolated(format!("generator {i} is not hyperbolic"))
        }
        other => other,
    })?;
    let taus: Vec<f64> = data.iter().map(|d| d.2).collect();
    let alphas: Vec<BoundaryPoint> = data.iter().map(|d| d.0).collect();
    let betas: Vec<BoundaryPoint> = data.iter().map(|d| d.1).collect();

    if let Some(sep) = rank_one_separation(&alphas, &betas) {
        let union = ArcUnion::single(sep.arc);
        let check = schottky_check(fs, &union);
        let margin = if sep.weak { 0.0 } else { opts.margin };
        if check.passes(margin) {
            return Ok(Certificate::RankOneSchottky { union, weak: sep.weak, clearance: check.min_clearance });
        }
        return Ok(Certificate::Inconclusive(InconclusiveReport {
            taus,
            thresholds: None,
            reason: format!(
                "rank-one separating arc found but its clearance {:.3e} is below the margin",
                check.min_clearance
            ),
        }));
    }

    for (i, a) in alphas.iter().enumerate() {
        for (j, b) in betas.iter().enumerate() {
            if a.approx_eq(b) {
                return Err(CriteriaError::PreconditionViolated(format!(
                    "attracting point of generator {i} equals repelling point of generator {j}"
                )));
            }
        }
    }

    let thresholds = compute_thresholds(fs)?;
    if let Some(e) = scan_not_semidiscrete(fs, &taus) {
        return Ok(Certificate::NotSemidiscrete(e));
    }
    let all_below = taus.iter().all(|&t| t < thresholds.lower);
    let all_above = taus.iter().all(|&t| t > thresholds.upper);
    let reason = if all_above {
        match assemble_global(fs) {
            Ok(sys) if sys.clearance >= opts.margin => {
                return Ok(Certificate::SemidiscreteInverseFree(Box::new(sys)));
            }
            Ok(sys) => format!("assembled union clearance {:.3e} is below the margin", sys.clearance),
            Err(e) => format!("interval assembly failed: {e}"),
        }
    } else if all_below {
        "all translation lengths are below the lower threshold but no witness pair was located".to_string()
    } else {
        format!("translation lengths are not all below {:.6} nor all above {:.6}", thresholds.lower, thresholds.upper)
    };
    Ok(Certificate::Inconclusive(InconclusiveReport { taus, thresholds: Some(thresholds), reason }))
}

/// Multicone for a tuple of matrices with determinant +-1, when the criteria
/// certify a Schottky semigroup. `None` means no certificate, not a disproof.
pub fn uniform_hyperbolicity(mats: &[[f64; 4]]) -> Result<Option<ArcUnion>, CriteriaError> {
    if mats.is_empty() {
        return Err(CriteriaError::InvalidMatrix("empty tuple".into()));
    }
    let mut maps = Vec::with_capacity(mats.len());
    let mut reversing = false;
    for (k, m) in mats.iter().enumerate() {
        if !m.iter().all(|v| v.is_finite()) {
            return Err(CriteriaError::InvalidMatrix(format!("matrix {k} has non-finite entries")));
        }
        let det = m[0] * m[3] - m[1] * m[2];
        let scale = m.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        if (det.abs() - 1.0).abs() > 1e-9 * scale * scale {
            return Err(CriteriaError::InvalidMatrix(format!("matrix {k} has determinant {det}")));
        }
        if det < 0.0 {
            reversing = true;
            continue;
        }
        // det is already 1 up to rounding; rescaling by the computed det would
        // distort the trace of large matrices
        maps.push(MoebiusMap::with_sign(m[0], m[1], m[2], m[3]));
    }
    if reversing {
        return Ok(None);
    }
    match certify(&maps) {
        Ok(Certificate::SemidiscreteInverseFree(sys)) => Ok(Some(sys.union)),
        Ok(Certificate::RankOneSchottky { union, clearance, .. }) if clearance >= DEFAULT_MARGIN => Ok(Some(union)),
        Ok(_) | Err(CriteriaError::PreconditionViolated(_)) => Ok(None),
        Err(e) => Err(e),
    }
}
