//! Randomized checks of the geometry against brute-force oracles.

use proptest::prelude::*;
use pvoros_core::geometry::{clip, polygon_area, HalfPlane, Line};
use pvoros_core::region::half_plane_polygon;
use pvoros_core::{
    cost, feasible_hull, iso_line, lesser_area, optimal_t_ranges, partial_voros, region_area_closed_form,
    t_from_cost_ratio, upper_hull, Constraints, CostModel, CostSpec, DatasetProfile, FeasibleRegion,
    RocCurve, RocPoint,
};

fn pt(x: f64, y: f64) -> RocPoint {
    RocPoint { fpr: x, tpr: y }
}

/// Profile and constraints inside the practical regime.
fn practical() -> impl Strategy<Value = (DatasetProfile, Constraints)> {
    (20u64..2000, 1.5f64..30.0, 0.0f64..1.0, 0.001f64..0.999).prop_map(|(p, ratio, a, k)| {
        let n = ((p as f64) * ratio).ceil() as u64;
        let profile = DatasetProfile::new(p, n).unwrap();
        let prev = profile.prevalence();
        let alpha = prev + (1.0 - prev) * (0.01 + 0.98 * a);
        let kappa = k * profile.total() as f64;
        (profile, Constraints::new(alpha, kappa).unwrap())
    })
}

/// A uniformly random point of the region by rejection from the square.
fn feasible_point(region: &FeasibleRegion, u: &[(f64, f64)]) -> Option<RocPoint> {
    u.iter().map(|&(x, y)| pt(x, y)).find(|p| region.contains(*p))
}

/// Lesser area from first principles: clip the half-plane polygon of the
/// constraints by the half-plane of points costing at least as much.
fn brute_lesser_area(point: RocPoint, t: f64, profile: &DatasetProfile, c: &Constraints) -> f64 {
    let poly = half_plane_polygon(profile, c);
    // t*x - (1-t)*y >= t*h - (1-t)*k
    let lesser = HalfPlane(Line::new(-t, 1.0 - t, -(t * point.fpr - (1.0 - t) * point.tpr)));
    polygon_area(&clip(&poly, &lesser))
}

fn below_chain(chain: &[RocPoint], p: RocPoint) -> bool {
    chain.windows(2).any(|w| {
        let (a, b) = (w[0], w[1]);
        if p.fpr < a.fpr - 1e-12 || p.fpr > b.fpr + 1e-12 {
            return false;
        }
        if b.fpr - a.fpr < 1e-15 {
            return p.tpr <= a.tpr.max(b.tpr) + 1e-12;
        }
        let y = a.tpr + (b.tpr - a.tpr) * (p.fpr - a.fpr) / (b.fpr - a.fpr);
        p.tpr <= y + 1e-12
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn hull_is_concave_majorant(raw in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 0..8)) {
        let curve = RocCurve::from_points(raw.iter().map(|&(x, y)| pt(x, y)).collect(), None).unwrap();
        let hull: Vec<RocPoint> = upper_hull(&curve).points().collect();
        prop_assert_eq!(hull[0], RocPoint::ORIGIN);
        prop_assert_eq!(*hull.last().unwrap(), RocPoint::ALWAYS_ALARM);
        for v in &hull {
            prop_assert!(curve.points().contains(v));
        }
        for w in hull.windows(3) {
            let cross = (w[1].fpr - w[0].fpr) * (w[2].tpr - w[0].tpr)
                - (w[1].tpr - w[0].tpr) * (w[2].fpr - w[0].fpr);
            prop_assert!(cross < 0.0, "not strictly concave: {:?}", w);
        }
        for p in curve.points() {
            prop_assert!(below_chain(&hull, *p), "{:?} above hull {:?}", p, hull);
        }
    }

    #[test]
    fn cost_is_affine_and_orders_iso_sides(
        h in 0.0f64..1.0, k in 0.0f64..1.0, x in 0.0f64..1.0, y in 0.0f64..1.0, t in 0.0f64..1.0,
    ) {
        let tm = CostModel::new(t).unwrap();
        let c = cost(pt(h, k), tm);
        prop_assert!((c - (t * h + (1.0 - t) * (1.0 - k))).abs() < 1e-15);
        let mid = cost(pt(h, k).midpoint(pt(x, y)), tm);
        prop_assert!((mid - (c + cost(pt(x, y), tm)) / 2.0).abs() < 1e-14);
        let iso = iso_line(pt(h, k), tm);
        let other = cost(pt(x, y), tm);
        if other > c + 1e-12 {
            prop_assert!(iso.is_below(pt(x, y)));
        }
        if other < c - 1e-12 {
            prop_assert!(!iso.is_below(pt(x, y)));
        }
    }

    #[test]
    fn ratio_round_trip(p in 1u64..10_000, n in 1u64..10_000, r in 1e-3f64..1e3) {
        let profile = DatasetProfile::new(p, n).unwrap();
        let t = t_from_cost_ratio(r, &profile).unwrap();
        // relative error grows like 1 / (1 - t) as t approaches 1
        let condition = 1.0 + r * n as f64 / p as f64;
        prop_assert!(((t.cost_ratio(&profile) - r) / r).abs() < 1e-14 * condition);
    }

    #[test]
    fn region_matches_half_planes((profile, c) in practical()) {
        let region = FeasibleRegion::new(profile, c).unwrap();
        prop_assert!(region.case().is_main_case());
        let oracle = polygon_area(&half_plane_polygon(&profile, &c));
        prop_assert!((region.area() - oracle).abs() < 1e-10);
        let closed = region_area_closed_form(&profile, &c).unwrap();
        prop_assert!((region.area() - closed).abs() < 1e-10);
    }

    #[test]
    fn area_monotone_in_constraints(
        (profile, c) in practical(), dk in 0.0f64..0.5, da in 0.0f64..0.5,
    ) {
        let base = FeasibleRegion::new(profile, c).unwrap().area();
        let more_capacity = (c.kappa() + dk * profile.total() as f64).min(profile.total() as f64 - 1.0);
        if more_capacity > c.kappa() {
            let r = FeasibleRegion::new(profile, Constraints::new(c.alpha(), more_capacity).unwrap()).unwrap();
            prop_assert!(r.area() >= base - 1e-12);
        }
        let stricter = c.alpha() + da * (1.0 - c.alpha()) * 0.99;
        let r = FeasibleRegion::new(profile, Constraints::new(stricter, c.kappa()).unwrap()).unwrap();
        prop_assert!(r.area() <= base + 1e-12);
    }

    #[test]
    fn lesser_area_matches_brute_force(
        (profile, c) in practical(),
        u in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 64),
        s in 0.0f64..=1.0,
    ) {
        let region = FeasibleRegion::new(profile, c).unwrap();
        if let Some(p) = feasible_point(&region, &u) {
            let t = s * region.never_alarm_bound().unwrap();
            let got = lesser_area(p, CostModel::new(t).unwrap(), &region).unwrap();
            let want = brute_lesser_area(p, t, &profile, &c);
            prop_assert!((got.area - want).abs() < 1e-10, "{:?} vs {}", got, want);
        }
    }

    #[test]
    fn lower_cost_means_more_lesser_area(
        (profile, c) in practical(),
        u in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 128),
        s in 0.0f64..=1.0,
    ) {
        let region = FeasibleRegion::new(profile, c).unwrap();
        let pts: Vec<RocPoint> = u.iter().map(|&(x, y)| pt(x, y)).filter(|p| region.contains(*p)).take(2).collect();
        if pts.len() == 2 {
            let t = CostModel::new(s * region.never_alarm_bound().unwrap()).unwrap();
            let (a, b) = (pts[0], pts[1]);
            let (aa, ab) = (
                lesser_area(a, t, &region).unwrap().area,
                lesser_area(b, t, &region).unwrap().area,
            );
            if cost(a, t) <= cost(b, t) {
                prop_assert!(aa >= ab - 1e-12);
            } else {
                prop_assert!(ab >= aa - 1e-12);
            }
        }
    }

    #[test]
    fn lesser_area_continuous_in_t(
        (profile, c) in practical(),
        u in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 64),
        s in 0.0f64..0.999,
    ) {
        let region = FeasibleRegion::new(profile, c).unwrap();
        if let Some(p) = feasible_point(&region, &u) {
            let bound = region.never_alarm_bound().unwrap();
            let t0 = s * bound;
            let t1 = t0 + 1e-9;
            let a0 = lesser_area(p, CostModel::new(t0).unwrap(), &region).unwrap().normalized;
            let a1 = lesser_area(p, CostModel::new(t1).unwrap(), &region).unwrap().normalized;
            // the area moves at a bounded rate in t away from t = 0 and 1
            prop_assert!((a0 - a1).abs() < 1e-4, "{} vs {}", a0, a1);
        }
    }

    #[test]
    fn optimal_vertex_is_cheapest_feasible_point(
        (profile, c) in practical(),
        raw in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..12),
        s in 0.0f64..=1.0,
    ) {
        let region = FeasibleRegion::new(profile, c).unwrap();
        let curve = RocCurve::from_points(raw.iter().map(|&(x, y)| pt(x, y * y)).collect(), None).unwrap();
        let ranges = optimal_t_ranges(&feasible_hull(&curve, &region), &region);
        let t = s;
        let chosen = ranges.iter().find(|r| r.t_low <= t && t <= r.t_high).unwrap();
        let tm = CostModel::new(t).unwrap();
        let best = curve.points().iter().filter(|p| region.contains(**p))
            .map(|p| cost(*p, tm)).fold(f64::INFINITY, f64::min);
        prop_assert!(cost(chosen.point, tm) <= best + 1e-12);
    }

    #[test]
    fn pv_ignores_dominated_extra_points(
        (profile, c) in practical(),
        raw in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..8),
        extra in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..8),
    ) {
        let region = FeasibleRegion::new(profile, c).unwrap();
        let spec = CostSpec::uniform_t(0.0, region.never_alarm_bound().unwrap()).unwrap()
            .with_resolution(65).unwrap();
        let pts: Vec<RocPoint> = raw.iter().map(|&(x, y)| pt(x, y)).collect();
        let base = RocCurve::from_points(pts.clone(), None).unwrap();
        // each extra point is dominated by (or equal to) a feasible curve point
        let anchors: Vec<RocPoint> = base.points().iter().copied().filter(|p| region.contains(*p)).collect();
        let mut more = pts.clone();
        for (i, &(dx, dy)) in extra.iter().enumerate() {
            let q = anchors[i % anchors.len()];
            more.push(pt(q.fpr + (1.0 - q.fpr) * dx, q.tpr * dy));
        }
        let more = RocCurve::from_points(more, None).unwrap();
        let a = partial_voros(&base, &region, &spec).unwrap().value;
        let b = partial_voros(&more, &region, &spec).unwrap().value;
        prop_assert!((a - b).abs() < 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn lesser_area_beyond_bound_matches_brute_force(
        (profile, c) in practical(),
        u in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 64),
        t in 0.0f64..=1.0,
    ) {
        let region = FeasibleRegion::new(profile, c).unwrap();
        if let Some(p) = feasible_point(&region, &u) {
            let got = lesser_area(p, CostModel::new(t).unwrap(), &region).unwrap();
            let want = brute_lesser_area(p, t, &profile, &c);
            prop_assert!((got.area - want).abs() < 1e-10, "{:?} vs {}", got, want);
        }
    }
}

fn same_vertex_set(a: &[RocPoint], b: &[RocPoint], tol: f64) -> bool {
    let near = |p: &RocPoint, q: &RocPoint| (p.fpr - q.fpr).abs() <= tol && (p.tpr - q.tpr).abs() <= tol;
    a.len() == b.len() && a.iter().all(|p| b.iter().any(|q| near(p, q))) && b.iter().all(|q| a.iter().any(|p| near(p, q)))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 10_000,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn region_vertices_match_half_planes((profile, c) in practical()) {
        let region = FeasibleRegion::new(profile, c).unwrap();
        let oracle = half_plane_polygon(&profile, &c);
        prop_assert!(same_vertex_set(region.vertices(), &oracle, 1e-9), "{:?} vs {:?}", region.vertices(), oracle);
        prop_assert!((region.area() - polygon_area(&oracle)).abs() < 1e-12);
    }
}
