//! Certificates of semidiscreteness for semigroups generated by hyperbolic
//! Mobius maps of the upper half-plane.
//!
//! The crate decides, when the known sufficient criteria apply, whether the
//! semigroup generated by a finite set of hyperbolic maps is semidiscrete,
//! and emits checkable evidence: an elliptic word, or a union of boundary arcs
//! mapped strictly into itself by every generator.

pub mod arcs;
pub mod criteria;
pub mod fixtures;
pub mod intervals;
pub mod moebius;
pub mod oracle;
pub mod pair;
pub mod tol;

pub use arcs::{
    can_partition_rank_one, rank_one_separation, schottky_check, strictly_inside, verify_schottky, ArcError, ArcUnion,
    BoundaryArc, RankOneSeparation, SchottkyCheck,
};
pub use criteria::{
    certify, certify_with, compute_thresholds, crossing_limit_interval, elliptic_witness_disjoint, h_function,
    pair_trace_identity_check, triple_crossing_test, two_gen_disjoint_test, uniform_hyperbolicity, Certificate,
    CertifyOptions, CriteriaError, EllipticWitness, HRegion, InconclusiveReport, NotSemidiscreteEvidence, Thresholds,
};
pub use intervals::{
    assemble_global, build_crossing_pair_intervals, build_disjoint_pair_intervals, build_shared_alpha_intervals,
    BuildError, GlobalIntervalSystem, SharedAlphaIntervals, SharedGroup, SymmetricIntervalPair,
};
pub use moebius::{
    cayley_from_disc, cayley_to_disc, hyperbolic_distance, BoundaryPoint, ClassKind, Classification, Geodesic,
    MoebiusError, MoebiusMap, PlanePoint,
};
pub use oracle::{
    arc_hausdorff, chaos_game, enumerate, enumerate_with, find_elliptic, inverse_free_probe, sample_hull,
    EnumerateOptions, EnumerationReport, OracleError, Word,
};
pub use pair::{
    axes_distance_from_cr, common_perpendicular, configuration, cross_ratio, crossing_point,
    inverse_flip_identity_check, AxisFrame, CommonPerpendicular, CrossRatioValue, GeometryError, PairConfig,
    PairGeometry,
};
