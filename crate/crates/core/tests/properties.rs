use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use semicert_core::pair::intersection_angle;
use semicert_core::*;

fn sl2() -> impl Strategy<Value = MoebiusMap> {
    (-2.0f64..2.0, -2.0f64..2.0, -2.0f64..2.0)
        .prop_filter("a away from 0", |(a, b, c)| a.abs() > 0.3 && ((1.0 + b * c) / a).abs() < 5.0)
        .prop_map(|(a, b, c)| MoebiusMap::normalize(a, b, c, (1.0 + b * c) / a).unwrap())
}

/// Hyperbolic map from disc angles of beta and alpha, kept apart.
fn hyperbolic() -> impl Strategy<Value = MoebiusMap> {
    (0.0f64..TAU, 0.2f64..(TAU - 0.2), 0.05f64..6.0).prop_map(|(b, gap, tau)| {
        MoebiusMap::from_axis_and_length(
            BoundaryPoint::from_disc_angle(b),
            BoundaryPoint::from_disc_angle(b + gap),
            tau,
        )
        .unwrap()
    })
}

fn boundary_point() -> impl Strategy<Value = BoundaryPoint> {
    (0.0f64..TAU).prop_map(BoundaryPoint::from_disc_angle)
}

fn plane_point() -> impl Strategy<Value = PlanePoint> {
    (-5.0f64..5.0, 0.01f64..5.0).prop_map(|(x, y)| PlanePoint::new(x, y).unwrap())
}

fn angle_close(p: &BoundaryPoint, q: &BoundaryPoint, tol: f64) -> bool {
    p.angular_distance(q) <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalize_is_projective(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, d in -3.0f64..3.0, s in prop_oneof![-4.0f64..-0.1, 0.1f64..4.0]) {
        prop_assume!(a * d - b * c > 0.05);
        let m = MoebiusMap::normalize(a, b, c, d).unwrap();
        let n = MoebiusMap::normalize(s * a, s * b, s * c, s * d).unwrap();
        prop_assert!(m.max_entry_distance(&n) < 1e-12);
    }

    #[test]
    fn classification_is_conjugation_invariant(f in hyperbolic(), m in sl2()) {
        let g = f.conjugate(&m);
        prop_assert_eq!(f.classify().kind(), g.classify().kind());
        let (tf, tg) = (f.translation_length().unwrap(), g.translation_length().unwrap());
        prop_assert!((tf - tg).abs() < 1e-8 * tf.max(1.0));
    }

    #[test]
    fn fixed_points_are_fixed(f in hyperbolic()) {
        let (alpha, beta, _) = f.hyperbolic_data().unwrap();
        prop_assert!(angle_close(&f.apply_boundary(&alpha), &alpha, 1e-9));
        prop_assert!(angle_close(&f.apply_boundary(&beta), &beta, 1e-9));
    }

    #[test]
    fn iterates_converge_to_alpha(f in hyperbolic(), p in boundary_point()) {
        let (alpha, beta, _) = f.hyperbolic_data().unwrap();
        prop_assume!(p.angular_distance(&beta) > 1e-3);
        let mut x = p;
        for _ in 0..2000 {
            x = f.apply_boundary(&x);
        }
        prop_assert!(x.angular_distance(&alpha) < 1e-6);
    }

    #[test]
    fn tau_of_powers(f in hyperbolic(), k in 1u32..=20) {
        let tau = f.translation_length().unwrap();
        prop_assume!(tau * k as f64 <= 60.0);
        let tk = f.pow(k as i64).translation_length().unwrap();
        prop_assert!((tk - k as f64 * tau).abs() < 1e-8 * (k as f64 * tau).max(1.0));
    }

    #[test]
    fn triangle_inequality(z in plane_point(), w in plane_point(), u in plane_point()) {
        let (a, b, c) = (hyperbolic_distance(&z, &w), hyperbolic_distance(&w, &u), hyperbolic_distance(&z, &u));
        prop_assert!(c <= a + b + 1e-12 * (1.0 + a + b));
    }

    #[test]
    fn arc_image_respects_composition(f in sl2(), g in sl2(), s in 0.0f64..TAU, w in 0.1f64..(TAU - 0.1)) {
        let arc = BoundaryArc::from_angles(s, s + w).unwrap();
        let one = arc.image(&f.compose(&g));
        let two = arc.image(&g).image(&f);
        prop_assert!(angle_close(&one.start(), &two.start(), 1e-9));
        prop_assert!(angle_close(&one.end(), &two.end(), 1e-9));
        prop_assert!((one.sweep() - two.sweep()).abs() < 1e-9);
    }

    #[test]
    fn strictly_inside_nested_family(s in 0.0f64..TAU, w in 1.0f64..5.0, i1 in 0.01f64..0.2, i2 in 0.01f64..0.2) {
        let outer = ArcUnion::single(BoundaryArc::from_angles(s, s + w).unwrap());
        let mid = ArcUnion::single(BoundaryArc::from_angles(s + i1, s + w - i1).unwrap());
        let inner = ArcUnion::single(BoundaryArc::from_angles(s + i1 + i2, s + w - i1 - i2).unwrap());
        prop_assert!(strictly_inside(&mid, &outer, 1e-7));
        prop_assert!(strictly_inside(&inner, &mid, 1e-7));
        prop_assert!(strictly_inside(&inner, &outer, 1e-7));
        prop_assert!(!strictly_inside(&outer, &mid, 1e-7));
    }

    #[test]
    fn rank_one_partition_is_moebius_invariant(angles in proptest::collection::vec(0.0f64..TAU, 6), m in sl2()) {
        let pts: Vec<BoundaryPoint> = angles.iter().map(|&a| BoundaryPoint::from_disc_angle(a)).collect();
        let moved: Vec<BoundaryPoint> = pts.iter().map(|p| m.apply_boundary(p)).collect();
        prop_assert_eq!(
            can_partition_rank_one(&pts[..3], &pts[3..]),
            can_partition_rank_one(&moved[..3], &moved[3..])
        );
    }

    #[test]
    fn cross_ratio_is_invariant_and_symmetric(f in hyperbolic(), g in hyperbolic(), m in sl2(), k in 1i64..4, j in 1i64..4) {
        let c = cross_ratio(&f, &g).unwrap();
        prop_assume!(matches!(c, CrossRatioValue::Finite(v) if v.abs() < 1e4));
        let c = c.finite().unwrap();
        let scale = c.abs().max(1.0);
        let conj = cross_ratio(&f.conjugate(&m), &g.conjugate(&m)).unwrap().finite().unwrap();
        prop_assert!((conj - c).abs() < 1e-9 * scale * 100.0);
        let swapped = cross_ratio(&g, &f).unwrap().finite().unwrap();
        prop_assert!((swapped - c).abs() < 1e-9 * scale);
        let iter = cross_ratio(&f.pow(k), &g.pow(j)).unwrap().finite().unwrap();
        prop_assert!((iter - c).abs() < 1e-6 * scale);
    }

    #[test]
    fn crossing_roundtrip(theta in 0.05f64..(PI - 0.05), m in sl2()) {
        let (f, g) = fixtures::crossing_pair(theta, 1.0, 1.0);
        let (f, g) = (f.conjugate(&m), g.conjugate(&m));
        let geo = configuration(&f, &g).unwrap();
        let back = geo.theta().unwrap();
        prop_assert!((back - theta).abs() < 1e-8);
        let c = geo.cross_ratio.finite().unwrap();
        prop_assert!((c + (0.5 * theta).tan().powi(2)).abs() < 1e-8 * c.abs().max(1.0));
    }

    #[test]
    fn thresholds_monotone_in_pairs(cs in proptest::collection::vec(prop_oneof![-50.0f64..-0.01, 0.01f64..0.99, 1.01f64..50.0], 1..8)) {
        let table: Vec<(usize, usize, f64)> = cs.iter().enumerate().map(|(k, &c)| (0, k + 1, c)).collect();
        for n in 1..table.len() {
            let small = Thresholds::from_values(&table[..n]);
            let big = Thresholds::from_values(&table[..=n]);
            prop_assert!(big.lower <= small.lower);
            prop_assert!(big.upper >= small.upper);
        }
        let t = Thresholds::from_values(&table);
        prop_assert!(t.lower < t.upper);
    }

    #[test]
    fn hregion_constants(d in 0.01f64..10.0) {
        let r = HRegion::new(d).unwrap();
        prop_assert!((r.h(r.a, r.a) + 7.0 / 9.0).abs() < 1e-10);
        prop_assert!((r.h(r.b, r.b) + 0.5).abs() < 1e-10);
        prop_assert!((r.h(r.b_prime, r.b_prime) - 1.0).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn emitted_disjoint_arcs_are_symmetric(c in 1.5f64..30.0, extra in 0.1f64..4.0, m in sl2()) {
        let tau = c.ln() + 1.5 + extra;
        let (f, g) = fixtures::disjoint_pair(c, tau, tau);
        let (f, g) = (f.conjugate(&m), g.conjugate(&m));
        let (pf, pg) = build_disjoint_pair_intervals(&f, &g).unwrap();
        for (p, owner) in [(pf, f), (pg, g)] {
            prop_assert!(p.maps_into(&owner, 1e-7));
            let axis = owner.axis().unwrap();
            for arc in [p.a, p.b] {
                let chord = Geodesic::new(arc.start(), arc.end()).unwrap();
                let angle = intersection_angle(&axis, &chord).unwrap();
                prop_assert!((angle - PI / 2.0).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn schottky_subsets(tau in 41.0f64..44.0, drop in 0usize..5) {
        let fs = fixtures::five_axes(tau);
        let sys = assemble_global(&fs).unwrap();
        prop_assert!(verify_schottky(&fs, &sys.union, 1e-7));
        prop_assert!(sys.m_constant <= sys.m_bound);
        let sub: Vec<MoebiusMap> = fs.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, f)| *f).collect();
        prop_assert!(verify_schottky(&sub, &sys.union, 1e-7));
    }
}
