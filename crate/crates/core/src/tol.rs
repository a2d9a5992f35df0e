//! Numerical tolerances shared across the crate.

/// Band around |trace| = 2 that classifies as parabolic.
pub const TRACE_EPS: f64 = 1e-9;

/// Max-entry distance from ±I that classifies as the identity.
pub const IDENTITY_EPS: f64 = 1e-9;

/// Two boundary points closer than this (disc radians) are the same point.
pub const ANGLE_EPS: f64 = 1e-9;

/// Cross ratios within this of 0 or 1 are degenerate.
pub const CROSS_RATIO_EPS: f64 = 1e-9;

/// Default clearance demanded of a Schottky certificate, in disc radians.
pub const DEFAULT_MARGIN: f64 = 1e-7;

/// Slack absorbed when comparing clearances against a margin.
pub const CLEARANCE_SLACK: f64 = 1e-12;

/// Default rounding grid for word deduplication.
pub const DEDUP_TOL: f64 = 1e-10;

/// Default cap on distinct words kept by the enumerator.
pub const MAX_WORDS: usize = 2_000_000;

/// Words with |trace| below 2 - this are reported as elliptic.
pub const ELLIPTIC_EPS: f64 = 1e-9;
