//! Brute-force evidence: breadth-first word enumeration, elliptic and
//! near-identity detection, and chaos-game sampling of the forward limit set.
//!
//! Nothing here is a proof. Results are empirical and depend on budgets.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arcs::BoundaryArc;
use crate::moebius::{BoundaryPoint, MoebiusMap};
use crate::tol::{DEDUP_TOL, ELLIPTIC_EPS, MAX_WORDS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("enumeration exceeded the budget of {0} distinct words")]
    BudgetExceeded(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// A word in the generators. `letters = [i1, ..., ik]` is the map
/// F[i1] o ... o F[ik], so the last letter acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct Word {
    pub letters: Vec<usize>,
    pub matrix: MoebiusMap,
}

impl Word {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Run-length form: consecutive equal letters collapse to (index, exponent).
    pub fn exponents(&self) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = Vec::new();
        for &l in &self.letters {
            match out.last_mut() {
                Some((i, e)) if *i == l => *e += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }

    /// Rebuild the matrix from the letters.
    pub fn evaluate(letters: &[usize], fs: &[MoebiusMap]) -> MoebiusMap {
        letters.iter().fold(MoebiusMap::identity(), |acc, &i| acc.compose(&fs[i]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerateOptions {
    pub max_len: usize,
    pub dedup_tol: f64,
    /// Cap on distinct group elements stored.
    pub max_words: usize,
    pub stop_at_first_elliptic: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { max_len: 10, dedup_tol: DEDUP_TOL, max_words: MAX_WORDS, stop_at_first_elliptic: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationReport {
    pub max_len: usize,
    pub dedup_tol: f64,
    pub budget: usize,
    /// Words generated, duplicates included.
    pub words_explored: u64,
    /// Distinct elements kept after rounding.
    pub distinct: usize,
    /// Words that rounded onto an element already seen.
    pub duplicate_classes: u64,
    pub min_identity_distance: f64,
    pub closest_to_identity: Option<Word>,
    /// First elliptic words in BFS order (at most 64 kept).
    pub elliptic_words: Vec<Word>,
    pub elliptic_count: u64,
    /// Length reached when the enumeration ended.
    pub depth_reached: usize,
}

const MAX_ELLIPTIC_KEPT: usize = 64;

type Key = [i64; 4];

fn key_of(m: &MoebiusMap, tol: f64) -> Key {
    let e = m.entries();
    // f64 -> i64 casts saturate, so huge entries still hash deterministically
    [0, 1, 2, 3].map(|k| (e[k] / tol).round() as i64)
}

struct Node {
    parent: u32,
    letter: u32,
    matrix: MoebiusMap,
}

struct Tree {
    nodes: Vec<Node>,
}

impl Tree {
    fn word(&self, mut idx: usize) -> Word {
        let matrix = self.nodes[idx].matrix;
        let mut letters = Vec::new();
        while idx != 0 {
            letters.push(self.nodes[idx].letter as usize);
            idx = self.nodes[idx].parent as usize;
        }
        letters.reverse();
        Word { letters, matrix }
    }
}

fn is_elliptic(m: &MoebiusMap) -> bool {
    m.trace().abs() < 2.0 - ELLIPTIC_EPS
}

fn check_args(fs: &[MoebiusMap], opts: &EnumerateOptions) -> Result<(), OracleError> {
    if fs.is_empty() {
        return Err(OracleError::InvalidArgument("no generators".into()));
    }
    if opts.max_len < 1 {
        return Err(OracleError::InvalidArgument("max_len must be at least 1".into()));
    }
    if !(opts.dedup_tol > 0.0) {
        return Err(OracleError::InvalidArgument("dedup_tol must be positive".into()));
    }
    Ok(())
}

/// Breadth-first enumeration, returning the report and the distinct elements.
fn run(fs: &[MoebiusMap], opts: &EnumerateOptions) -> Result<(EnumerationReport, Tree), OracleError> {
    check_args(fs, opts)?;
    let mut tree = Tree { nodes: vec![Node { parent: 0, letter: 0, matrix: MoebiusMap::identity() }] };
    let mut seen: HashMap<Key, u32> = HashMap::new();
    let mut report = EnumerationReport {
        max_len: opts.max_len,
        dedup_tol: opts.dedup_tol,
        budget: opts.max_words,
        words_explored: 0,
        distinct: 0,
        duplicate_classes: 0,
        min_identity_distance: f64::INFINITY,
        closest_to_identity: None,
        elliptic_words: Vec::new(),
        elliptic_count: 0,
        depth_reached: 0,
    };
    let mut closest: Option<usize> = None;
    let mut frontier: Vec<u32> = vec![0];
    for depth in 1..=opts.max_len {
        let mut next = Vec::with_capacity(frontier.len() * fs.len());
        for &parent in &frontier {
            let base = tree.nodes[parent as usize].matrix;
            for (i, f) in fs.iter().enumerate() {
                report.words_explored += 1;
                let m = base.compose(f);
                let key = key_of(&m, opts.dedup_tol);
                if seen.contains_key(&key) {
                    report.duplicate_classes += 1;
                    continue;
                }
                if seen.len() >= opts.max_words {
                    return Err(OracleError::BudgetExceeded(opts.max_words));
                }
                let idx = tree.nodes.len();
                tree.nodes.push(Node { parent, letter: i as u32, matrix: m });
                seen.insert(key, idx as u32);
                next.push(idx as u32);
                let dist = m.identity_distance();
                if dist < report.min_identity_distance {
                    report.min_identity_distance = dist;
                    closest = Some(idx);
                }
                if is_elliptic(&m) {
                    report.elliptic_count += 1;
                    if report.elliptic_words.len() < MAX_ELLIPTIC_KEPT {
                        report.elliptic_words.push(tree.word(idx));
                    }
                    if opts.stop_at_first_elliptic {
                        report.depth_reached = depth;
                        report.distinct = seen.len();
                        report.closest_to_identity = closest.map(|c| tree.word(c));
                        return Ok((report, tree));
                    }
                }
            }
        }
        report.depth_reached = depth;
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    report.distinct = seen.len();
    report.closest_to_identity = closest.map(|c| tree.word(c));
    Ok((report, tree))
}

pub fn enumerate(fs: &[MoebiusMap], max_len: usize, dedup_tol: f64) -> Result<EnumerationReport, OracleError> {
    enumerate_with(fs, &EnumerateOptions { max_len, dedup_tol, ..Default::default() })
}

pub fn enumerate_with(fs: &[MoebiusMap], opts: &EnumerateOptions) -> Result<EnumerationReport, OracleError> {
    run(fs, opts).map(|(r, _)| r)
}

/// First elliptic word in BFS order, if any up to `max_len`.
pub fn find_elliptic(fs: &[MoebiusMap], max_len: usize) -> Result<Option<Word>, OracleError> {
    let opts = EnumerateOptions { max_len, stop_at_first_elliptic: true, ..Default::default() };
    let report = enumerate_with(fs, &opts)?;
    Ok(report.elliptic_words.into_iter().next())
}

const PROBE_TOL: f64 = 1e-8;

/// True when no product of two enumerated words lands within 1e-8 of the identity.
pub fn inverse_free_probe(fs: &[MoebiusMap], max_len: usize) -> Result<bool, OracleError> {
    let opts = EnumerateOptions { max_len, ..Default::default() };
    let (_, tree) = run(fs, &opts)?;
    let mut grid: HashMap<Key, Vec<u32>> = HashMap::new();
    for (idx, node) in tree.nodes.iter().enumerate().skip(1) {
        grid.entry(key_of(&node.matrix, PROBE_TOL)).or_default().push(idx as u32);
    }
    for node in tree.nodes.iter().skip(1) {
        let inv = node.matrix.inverse();
        // the sign-normalized inverse may sit on either side of a cell boundary
        for cand in
            [inv, MoebiusMap::with_sign(-inv.entries()[0], -inv.entries()[1], -inv.entries()[2], -inv.entries()[3])]
        {
            let k = key_of(&cand, PROBE_TOL);
            for d in 0..81usize {
                let off = [d % 3, (d / 3) % 3, (d / 9) % 3, d / 27].map(|o| o as i64 - 1);
                let probe = [0, 1, 2, 3].map(|j| k[j].saturating_add(off[j]));
                if let Some(hits) = grid.get(&probe) {
                    for &h in hits {
                        let v = &tree.nodes[h as usize].matrix;
                        if node.matrix.compose(v).identity_distance() <= PROBE_TOL * 4.0 {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

const BURN_IN: usize = 256;

/// Probability of reusing the previous letter. Long runs of one generator are
/// needed to get close to its attracting point; uniform choices almost never
/// produce them.
const PERSISTENCE: f64 = 0.9;

/// Random forward orbit of a boundary point under the generators. The orbit
/// starts at the attracting point of the first hyperbolic generator, so every
/// recorded sample lies in the forward limit set up to rounding. Letters
/// follow a persistent chain: repeat the last one with probability 0.9,
/// otherwise draw uniformly.
pub fn chaos_game(fs: &[MoebiusMap], samples: usize, seed: u64) -> Vec<BoundaryPoint> {
    if fs.is_empty() || samples == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x =
        fs.iter().find_map(|f| f.hyperbolic_data().ok().map(|d| d.0)).unwrap_or_else(|| BoundaryPoint::from_real(0.0));
    let mut letter = 0;
    let mut step = |x: &BoundaryPoint| {
        if !rng.gen_bool(PERSISTENCE) {
            letter = rng.gen_range(0..fs.len());
        }
        fs[letter].apply_boundary(x)
    };
    for _ in 0..BURN_IN {
        x = step(&x);
    }
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        x = step(&x);
        out.push(x);
    }
    out
}

/// Smallest closed arc holding every sample: the complement of the widest gap.
/// `None` when the samples collapse to a single point.
pub fn sample_hull(samples: &[BoundaryPoint]) -> Option<BoundaryArc> {
    let mut angles: Vec<f64> = samples.iter().map(|p| p.disc_angle()).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() <= crate::tol::ANGLE_EPS);
    if angles.len() < 2 {
        return None;
    }
    let n = angles.len();
    let mut widest = (angles[0] + std::f64::consts::TAU - angles[n - 1], 0usize);
    for k in 1..n {
        let gap = angles[k] - angles[k - 1];
        if gap > widest.0 {
            widest = (gap, k);
        }
    }
    let start = angles[widest.1];
    let end = angles[(widest.1 + n - 1) % n];
    BoundaryArc::from_angles(start, end).ok()
}

/// Hausdorff distance (disc radians) between a sample set and the closure of an arc.
pub fn arc_hausdorff(samples: &[BoundaryPoint], arc: &BoundaryArc) -> f64 {
    if samples.is_empty() {
        return f64::INFINITY;
    }
    let sweep = arc.sweep();
    let mut escape: f64 = 0.0;
    let mut offsets = Vec::with_capacity(samples.len());
    for p in samples {
        if arc.contains_closure(p) {
            let t = (p.disc_angle() - arc.start_angle()).rem_euclid(std::f64::consts::TAU);
            offsets.push(if t > sweep { 0.0 } else { t });
        } else {
            escape = escape.max(p.angular_distance(&arc.start()).min(p.angular_distance(&arc.end())));
        }
    }
    if offsets.is_empty() {
        return f64::INFINITY;
    }
    offsets.sort_by(f64::total_cmp);
    let mut cover = offsets[0].max(sweep - offsets[offsets.len() - 1]);
    for w in offsets.windows(2) {
        cover = cover.max(0.5 * (w[1] - w[0]));
    }
    escape.max(cover)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn exponents_run_length() {
        let w = Word { letters: vec![0, 0, 1, 1, 1, 0], matrix: MoebiusMap::identity() };
        assert_eq!(w.exponents(), vec![(0, 2), (1, 3), (0, 1)]);
    }

    #[test]
    fn words_match_their_matrices() {
        let fs = fixtures::five_axes(0.7);
        let r = enumerate(&fs, 3, DEDUP_TOL).unwrap();
        let w = r.closest_to_identity.unwrap();
        let m = Word::evaluate(&w.letters, &fs);
        assert!(m.max_entry_distance(&w.matrix) < 1e-12);
    }

    #[test]
    fn dilation_and_shift_has_no_elliptics() {
        let (f, g) = fixtures::dilation_and_shift();
        let r = enumerate(&[f, g], 12, DEDUP_TOL).unwrap();
        assert_eq!(r.elliptic_count, 0);
        assert!(r.min_identity_distance > 0.1);
        assert!(r.duplicate_classes > 0);
    }

    #[test]
    fn single_generator() {
        let f = MoebiusMap::normalize(2.0, 0.0, 0.0, 0.5).unwrap();
        assert!(find_elliptic(&[f], 20).unwrap().is_none());
        let s = chaos_game(&[f], 100, 1);
        assert!(s.iter().all(|p| p.is_infinity()));
    }

    #[test]
    fn short_disjoint_pair_has_elliptic() {
        let (f, g) = fixtures::disjoint_pair(9.0, 0.1, 0.1);
        let w = find_elliptic(&[f, g], 40).unwrap().unwrap();
        assert!(w.matrix.trace().abs() < 2.0 - ELLIPTIC_EPS);
        let direct = Word::evaluate(&w.letters, &[f, g]);
        assert!(direct.trace().abs() < 2.0);
    }

    #[test]
    fn inverse_probe() {
        let (f, g) = fixtures::dilation_and_shift();
        assert!(inverse_free_probe(&[f, g], 10).unwrap());
        let h = MoebiusMap::normalize(3.0, 1.0, 1.0, 0.5).unwrap();
        assert!(!inverse_free_probe(&[h, h.inverse()], 2).unwrap());
    }

    #[test]
    fn budget() {
        let fs = fixtures::five_axes(0.7);
        let opts = EnumerateOptions { max_len: 10, max_words: 1000, ..Default::default() };
        assert_eq!(enumerate_with(&fs, &opts), Err(OracleError::BudgetExceeded(1000)));
    }

    #[test]
    fn hull_of_samples() {
        let (f, g) = fixtures::crossing_pair(std::f64::consts::FRAC_PI_2, 0.15, 0.15);
        let hull = sample_hull(&chaos_game(&[f, g], 20_000, 2)).unwrap();
        assert!(hull.sweep() <= std::f64::consts::FRAC_PI_2 + 1e-9);
        assert!(hull.sweep() > 1.4);
        assert!(sample_hull(&[BoundaryPoint::INFINITY; 3]).is_none());
    }

    #[test]
    fn deterministic_samples() {
        let (f, g) = fixtures::crossing_pair(std::f64::consts::FRAC_PI_2, 0.15, 0.15);
        assert_eq!(chaos_game(&[f, g], 500, 7), chaos_game(&[f, g], 500, 7));
    }
}
