//! JSON reports. Every report is built from library values only, so tests can
//! rebuild the exact output without going through the binary.

use semicert_core::criteria::PairEntry;
use semicert_core::{
    configuration, cross_ratio, sample_hull, ArcUnion, BoundaryArc, BoundaryPoint, Certificate, Classification,
    CrossRatioValue, EnumerationReport, GeometryError, MoebiusMap, NotSemidiscreteEvidence, PairConfig, Thresholds,
    Word,
};
use serde::Serialize;

use crate::input::SCHEMA_VERSION;

pub const TOOL: &str = "semicert";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum RealOrInf {
    Real(f64),
    Inf(&'static str),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointOut {
    /// Disc angle in [0, 2pi).
    pub angle: f64,
    /// Half-plane value, or "inf".
    pub value: RealOrInf,
}

impl From<&BoundaryPoint> for PointOut {
    fn from(p: &BoundaryPoint) -> Self {
        PointOut { angle: p.disc_angle(), value: p.to_real().map(RealOrInf::Real).unwrap_or(RealOrInf::Inf("inf")) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcOut {
    pub start: PointOut,
    pub end: PointOut,
    /// Counterclockwise angular length.
    pub sweep: f64,
}

impl From<&BoundaryArc> for ArcOut {
    fn from(a: &BoundaryArc) -> Self {
        ArcOut { start: (&a.start()).into(), end: (&a.end()).into(), sweep: a.sweep() }
    }
}

fn arcs(u: &ArcUnion) -> Vec<ArcOut> {
    u.arcs().iter().map(ArcOut::from).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Header {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
}

impl Header {
    pub fn new(command: &'static str) -> Self {
        Header { schema: SCHEMA_VERSION, tool: TOOL, version: VERSION, command }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyRow {
    pub index: usize,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<PointOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<PointOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed: Option<PointOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation: Option<f64>,
    pub matrix: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyReport {
    #[serde(flatten)]
    pub header: Header,
    pub generators: Vec<ClassifyRow>,
}

pub fn classify_report(maps: &[MoebiusMap]) -> ClassifyReport {
    let generators = maps
        .iter()
        .enumerate()
        .map(|(index, m)| {
            let mut row = ClassifyRow {
                index,
                kind: "identity",
                alpha: None,
                beta: None,
                tau: None,
                fixed: None,
                rotation: None,
                matrix: m.entries(),
            };
            match m.classify() {
                Classification::Identity => {}
                Classification::Elliptic { rotation } => {
                    row.kind = "elliptic";
                    row.rotation = Some(rotation);
                }
                Classification::Parabolic { fixed } => {
                    row.kind = "parabolic";
                    row.fixed = Some((&fixed).into());
                }
                Classification::Hyperbolic { alpha, beta, tau } => {
                    row.kind = "hyperbolic";
                    row.alpha = Some((&alpha).into());
                    row.beta = Some((&beta).into());
                    row.tau = Some(tau);
                }
            }
            row
        })
        .collect();
    ClassifyReport { header: Header::new("classify"), generators }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CrossRatioOut {
    Finite(f64),
    Infinite(&'static str),
}

impl From<CrossRatioValue> for CrossRatioOut {
    fn from(c: CrossRatioValue) -> Self {
        match c {
            CrossRatioValue::Finite(v) => CrossRatioOut::Finite(v),
            CrossRatioValue::Infinite => CrossRatioOut::Infinite("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairRow {
    pub i: usize,
    pub j: usize,
    pub cross_ratio: CrossRatioOut,
    pub config: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairsReport {
    #[serde(flatten)]
    pub header: Header,
    pub pairs: Vec<PairRow>,
}

fn config_name(c: &PairConfig) -> &'static str {
    match c {
        PairConfig::Crossing { .. } => "crossing",
        PairConfig::Disjoint { nested_attractors: false, .. } => "disjoint",
        PairConfig::Disjoint { nested_attractors: true, .. } => "disjoint_nested",
        PairConfig::SharedAlpha => "shared_alpha",
        PairConfig::SharedBeta => "shared_beta",
        PairConfig::AlphaMeetsBeta => "alpha_meets_beta",
        PairConfig::ParabolicDegenerate => "degenerate",
    }
}

pub fn pairs_report(maps: &[MoebiusMap]) -> Result<PairsReport, (usize, usize, GeometryError)> {
    let mut pairs = Vec::new();
    for i in 0..maps.len() {
        for j in (i + 1)..maps.len() {
            let geo = configuration(&maps[i], &maps[j]).map_err(|e| (i, j, e))?;
            let cr = match geo.config {
                PairConfig::SharedAlpha | PairConfig::SharedBeta => CrossRatioValue::Finite(0.0),
                _ => cross_ratio(&maps[i], &maps[j]).map_err(|e| (i, j, e))?,
            };
            let (theta, distance) = match geo.config {
                PairConfig::Crossing { theta } => (Some(theta), None),
                PairConfig::Disjoint { d, .. } => (None, Some(d)),
                _ => (None, None),
            };
            pairs.push(PairRow { i, j, cross_ratio: cr.into(), config: config_name(&geo.config), theta, distance });
        }
    }
    Ok(PairsReport { header: Header::new("pairs"), pairs })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdsOut {
    pub lower: f64,
    pub upper: f64,
    pub pairs_below_one: usize,
    pub pairs_counted: usize,
}

impl From<&Thresholds> for ThresholdsOut {
    fn from(t: &Thresholds) -> Self {
        let count = |f: fn(&PairEntry) -> bool| t.pairs.iter().filter(|p| f(p)).count();
        ThresholdsOut {
            lower: t.lower,
            upper: t.upper,
            pairs_below_one: count(|p| p.disjoint_outside),
            pairs_counted: count(|p| p.counts_for_upper),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorOut {
    pub index: usize,
    pub tau: f64,
    pub alpha: PointOut,
    pub beta: PointOut,
}

fn generator_rows(maps: &[MoebiusMap]) -> Vec<GeneratorOut> {
    maps.iter()
        .enumerate()
        .filter_map(|(index, m)| {
            m.hyperbolic_data().ok().map(|(a, b, tau)| GeneratorOut {
                index,
                tau,
                alpha: (&a).into(),
                beta: (&b).into(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalOut {
    pub owner: usize,
    pub a: ArcOut,
    pub b: ArcOut,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "criterion", rename_all = "snake_case")]
pub enum EvidenceOut {
    EllipticWord {
        pair: [usize; 2],
        /// [generator index, exponent], leftmost factor first.
        word: Vec<[usize; 2]>,
        trace: f64,
        h: f64,
    },
    TripleCrossing {
        pair: [usize; 2],
        third: usize,
        limit_arc: ArcOut,
        repeller: PointOut,
        jorgensen_value: f64,
        jorgensen_bound: f64,
    },
    IntervalSystem {
        union: Vec<ArcOut>,
        rank: usize,
        clearance: f64,
        m_constant: f64,
        m_bound: f64,
        intervals: Vec<IntervalOut>,
        notes: Vec<String>,
    },
    RankOne {
        union: Vec<ArcOut>,
        weak: bool,
        clearance: f64,
    },
    Inconclusive {
        reason: String,
        taus: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSummary {
    pub label: &'static str,
    pub max_len: usize,
    pub budget: usize,
    pub words_explored: u64,
    pub distinct: usize,
    pub elliptic_count: u64,
    pub first_elliptic: Option<Vec<[usize; 2]>>,
    pub min_identity_distance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    #[serde(flatten)]
    pub header: Header,
    pub kind: &'static str,
    pub definitive: bool,
    pub margin: f64,
    pub generators: Vec<GeneratorOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<ThresholdsOut>,
    pub evidence: EvidenceOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
}

pub fn word_pairs(w: &[(usize, u32)]) -> Vec<[usize; 2]> {
    w.iter().map(|&(i, e)| [i, e as usize]).collect()
}

pub fn certificate_report(
    maps: &[MoebiusMap],
    cert: &Certificate,
    thresholds: Option<&Thresholds>,
    margin: f64,
) -> CertificateReport {
    let evidence = match cert {
        Certificate::NotSemidiscrete(NotSemidiscreteEvidence::Elliptic { pair, word, trace, h }) => {
            EvidenceOut::EllipticWord { pair: [pair.0, pair.1], word: word_pairs(word), trace: *trace, h: *h }
        }
        Certificate::NotSemidiscrete(NotSemidiscreteEvidence::TripleCrossing {
            pair,
            third,
            limit_arc,
            repeller,
            jorgensen_value,
            jorgensen_bound,
        }) => EvidenceOut::TripleCrossing {
            pair: [pair.0, pair.1],
            third: *third,
            limit_arc: limit_arc.into(),
            repeller: repeller.into(),
            jorgensen_value: *jorgensen_value,
            jorgensen_bound: *jorgensen_bound,
        },
        Certificate::SemidiscreteInverseFree(sys) => EvidenceOut::IntervalSystem {
            union: arcs(&sys.union),
            rank: sys.rank(),
            clearance: sys.clearance,
            m_constant: sys.m_constant,
            m_bound: sys.m_bound,
            intervals: sys
                .pairs
                .iter()
                .map(|p| IntervalOut { owner: p.owner, a: (&p.a).into(), b: (&p.b).into() })
                .collect(),
            notes: sys.notes.clone(),
        },
        Certificate::RankOneSchottky { union, weak, clearance } => {
            EvidenceOut::RankOne { union: arcs(union), weak: *weak, clearance: *clearance }
        }
        Certificate::Inconclusive(r) => EvidenceOut::Inconclusive { reason: r.reason.clone(), taus: r.taus.clone() },
    };
    let from_cert = match cert {
        Certificate::Inconclusive(r) => r.thresholds.as_ref(),
        _ => None,
    };
    CertificateReport {
        header: Header::new("certify"),
        kind: cert.kind_name(),
        definitive: cert.is_definitive(),
        margin,
        generators: generator_rows(maps),
        thresholds: thresholds.or(from_cert).map(ThresholdsOut::from),
        evidence,
        oracle: None,
    }
}

pub fn oracle_summary(max_len: usize, budget: usize, r: Result<&EnumerationReport, String>) -> OracleSummary {
    match r {
        Ok(r) => OracleSummary {
            label: "empirical",
            max_len,
            budget,
            words_explored: r.words_explored,
            distinct: r.distinct,
            elliptic_count: r.elliptic_count,
            first_elliptic: r.elliptic_words.first().map(|w| word_pairs(&w.exponents())),
            min_identity_distance: r.min_identity_distance,
            error: None,
        },
        Err(e) => OracleSummary {
            label: "empirical",
            max_len,
            budget,
            words_explored: 0,
            distinct: 0,
            elliptic_count: 0,
            first_elliptic: None,
            min_identity_distance: f64::INFINITY,
            error: Some(e),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImageOut {
    pub index: usize,
    pub images: Vec<ArcOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CocycleReport {
    #[serde(flatten)]
    pub header: Header,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub union: Option<Vec<ArcOut>>,
    /// Image of every component of the union under every matrix.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub images: Option<Vec<ImageOut>>,
}

pub fn cocycle_report(mats: &[[f64; 4]], union: Option<&ArcUnion>) -> CocycleReport {
    let Some(u) = union else {
        return CocycleReport { header: Header::new("cocycle"), kind: "inconclusive", union: None, images: None };
    };
    let images = mats
        .iter()
        .enumerate()
        .map(|(index, m)| {
            let map = MoebiusMap::normalize(m[0], m[1], m[2], m[3]).expect("validated by the cocycle test");
            ImageOut { index, images: u.arcs().iter().map(|a| (&a.image(&map)).into()).collect() }
        })
        .collect();
    CocycleReport { header: Header::new("cocycle"), kind: "multicone", union: Some(arcs(u)), images: Some(images) }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordOut {
    pub word: Vec<[usize; 2]>,
    pub trace: f64,
}

impl From<&Word> for WordOut {
    fn from(w: &Word) -> Self {
        WordOut { word: word_pairs(&w.exponents()), trace: w.matrix.trace() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChaosOut {
    pub samples: usize,
    pub seed: u64,
    pub hull: Option<ArcOut>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    #[serde(flatten)]
    pub header: Header,
    pub label: &'static str,
    pub max_len: usize,
    pub dedup_tol: f64,
    pub budget: usize,
    pub words_explored: u64,
    pub distinct: usize,
    pub duplicate_classes: u64,
    pub depth_reached: usize,
    pub min_identity_distance: f64,
    pub closest_to_identity: Option<WordOut>,
    pub elliptic_count: u64,
    pub elliptic_words: Vec<WordOut>,
    pub chaos: ChaosOut,
}

pub fn oracle_report(r: &EnumerationReport, samples: &[BoundaryPoint], seed: u64) -> OracleReport {
    OracleReport {
        header: Header::new("oracle"),
        label: "empirical",
        max_len: r.max_len,
        dedup_tol: r.dedup_tol,
        budget: r.budget,
        words_explored: r.words_explored,
        distinct: r.distinct,
        duplicate_classes: r.duplicate_classes,
        depth_reached: r.depth_reached,
        min_identity_distance: r.min_identity_distance,
        closest_to_identity: r.closest_to_identity.as_ref().map(WordOut::from),
        elliptic_count: r.elliptic_count,
        elliptic_words: r.elliptic_words.iter().take(16).map(WordOut::from).collect(),
        chaos: ChaosOut { samples: samples.len(), seed, hull: sample_hull(samples).as_ref().map(ArcOut::from) },
    }
}
