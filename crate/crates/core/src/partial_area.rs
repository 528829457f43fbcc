//! Partial area of lesser classifiers: the part of the feasible region whose
//! points cost at least as much as a given operating point at cost
//! parameter `t`.
//!
//! For the three main region shapes, and `t` at or below the never-alarm
//! bound, the iso-performance line enters the region through the y axis at
//! `v_0t` and leaves through one of the region's right-hand edges. The
//! lesser polygon is then one of four shapes, chosen by comparing the
//! point's cost with the costs of the region's corner vertices:
//!
//! - triangle `(0,0), v_at, v_0t` (the line crosses the precision edge)
//! - quadrilateral `(0,0), v_ak, v_kt, v_0t` (crosses the capacity edge)
//! - pentagon `(0,0), v_ak, v_k1, v_t1, v_0t` (crosses `y = 1`, case 2)
//! - quadrilateral `(0,0), v_a1, v_t1, v_0t` (crosses `y = 1`, case 3)
//!
//! Everything else goes through convex half-plane clipping, which is also
//! the oracle the constructions are tested against.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{self, HalfPlane, Line};
use crate::region::{FeasibleRegion, RegionCase};
use crate::roc::{cost, iso_line, CostModel, IsoLine, RocPoint};

/// `x(t) = a + b / (c*t + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalLinearForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RationalLinearForm {
    pub fn eval(&self, t: f64) -> f64 {
        self.a + self.b / (self.c * t + self.d)
    }
}

/// Which moving vertex a [`RationalLinearForm`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexForm {
    /// Iso-line meets the precision line.
    AlphaT,
    /// Iso-line meets the capacity line.
    KappaT,
}

/// Coefficients giving the x coordinate of `v_at` or `v_kt` as a function of
/// `t` for a fixed operating point `(h, k)`.
///
/// Precision form: `x = A' - B'/(C'*t - D'))` with
/// `A' = (1-alpha)P(h+k)/(alpha N + (1-alpha)P)`,
/// `B' = (1-alpha)P(k - (h+k) alpha N/(alpha N + (1-alpha)P))`,
/// `C' = alpha N + (1-alpha)P`, `D' = alpha N`.
///
/// Capacity form: `x = A + B/(C*t + D)` with
/// `A = (P(h+k) - kappa)/(P - N)`, `B = kappa - kP - N*A`,
/// `C = P - N`, `D = N`.
///
/// Returns `None` for the capacity form when `P = N`, where `x` is affine in
/// `t` instead; callers intersect the lines directly in that case.
pub fn rational_linear_coeffs(
    point: RocPoint,
    region: &FeasibleRegion,
    which: VertexForm,
) -> Option<RationalLinearForm> {
    let (h, k) = (point.fpr, point.tpr);
    let profile = region.profile();
    let (pos, neg) = (profile.pos(), profile.neg());
    let alpha = region.constraints().alpha();
    let kappa = region.constraints().kappa();
    match which {
        VertexForm::AlphaT => {
            let c_prime = alpha * neg + (1.0 - alpha) * pos;
            let d_prime = alpha * neg;
            let a_prime = (1.0 - alpha) * pos * (h + k) / c_prime;
            let b_prime = (1.0 - alpha) * pos * (k - (h + k) * alpha * neg / c_prime);
            Some(RationalLinearForm {
                a: a_prime,
                b: -b_prime,
                c: c_prime,
                d: -d_prime,
            })
        }
        VertexForm::KappaT => {
            let c = pos - neg;
            if c == 0.0 {
                return None;
            }
            let a = (pos * (h + k) - kappa) / c;
            let b = kappa - k * pos - neg * a;
            Some(RationalLinearForm { a, b, c, d: neg })
        }
    }
}

/// Shape of a lesser-classifier polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LesserCase {
    /// `(0,0), v_at, v_0t`
    TriangleAlphaT,
    /// `(0,0), v_ak, v_kt, v_0t`
    QuadAlphaKappaT,
    /// `(0,0), v_ak, v_k1, v_t1, v_0t`
    Pentagon,
    /// `(0,0), v_a1, v_t1, v_0t`
    QuadAlphaOneT,
    /// The iso-line passes on or below the whole region.
    EmptyBelow,
    /// The iso-line passes on or above the whole region.
    FullRegion,
    /// Outside the four-shape regime (other region shapes, or `t` above the
    /// never-alarm bound); computed by clipping.
    Clipped,
}

impl LesserCase {
    pub fn name(&self) -> &'static str {
        match self {
            LesserCase::TriangleAlphaT => "TriangleAlphaT",
            LesserCase::QuadAlphaKappaT => "QuadAlphaKappaT",
            LesserCase::Pentagon => "Pentagon",
            LesserCase::QuadAlphaOneT => "QuadAlphaOneT",
            LesserCase::EmptyBelow => "EmptyBelow",
            LesserCase::FullRegion => "FullRegion",
            LesserCase::Clipped => "Clipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialAreaResult {
    pub area: f64,
    /// `area / A*`.
    pub normalized: f64,
    pub case: LesserCase,
    pub vertices: Vec<RocPoint>,
}

impl PartialAreaResult {
    fn new(case: LesserCase, vertices: Vec<RocPoint>, region: &FeasibleRegion) -> Self {
        let total = region.area();
        let area = match case {
            LesserCase::EmptyBelow => 0.0,
            LesserCase::FullRegion => total,
            _ => geometry::polygon_area(&vertices).clamp(0.0, total),
        };
        Self {
            area,
            normalized: area / total,
            case,
            vertices,
        }
    }
}

/// Lesser-classifier polygon for the three main region shapes.
///
/// Errors when the region is not one of those shapes or the point is
/// infeasible. For `t` above the never-alarm bound the four-shape lemma
/// does not hold and the result is computed by clipping instead.
pub fn lesser_vertices(
    point: RocPoint,
    t: CostModel,
    region: &FeasibleRegion,
) -> Result<PartialAreaResult> {
    let case = region.case();
    if !case.is_main_case() {
        return Err(Error::UnsupportedCase(case));
    }
    if !region.contains(point) {
        return Err(Error::InfeasiblePoint {
            fpr: point.fpr,
            tpr: point.tpr,
        });
    }
    let tv = t.t();
    let bound = region
        .never_alarm_bound()
        .expect("main cases have 0 < alpha < 1");
    if tv > bound {
        return Ok(clipped(point, t, region));
    }

    let c = cost(point, t);
    if c >= 1.0 - tv {
        return Ok(PartialAreaResult::new(LesserCase::EmptyBelow, Vec::new(), region));
    }
    let cheapest = region
        .vertices()
        .iter()
        .map(|&v| cost(v, t))
        .fold(f64::INFINITY, f64::min);
    if c <= cheapest {
        return Ok(PartialAreaResult::new(
            LesserCase::FullRegion,
            region.vertices().to_vec(),
            region,
        ));
    }

    let corners = region.corners();
    let verts = Vertices::new(point, t, region);
    let origin = RocPoint::ORIGIN;
    let (shape, vertices) = match case {
        RegionCase::Case1Triangle => {
            if c >= cost(corners.alpha_kappa, t) {
                triangle(&verts)
            } else {
                (
                    LesserCase::QuadAlphaKappaT,
                    vec![origin, corners.alpha_kappa, verts.kappa_t(), verts.zero_t()],
                )
            }
        }
        RegionCase::Case2Quadrilateral => {
            if c >= cost(corners.alpha_kappa, t) {
                triangle(&verts)
            } else if c >= cost(corners.kappa_one, t) {
                (
                    LesserCase::QuadAlphaKappaT,
                    vec![origin, corners.alpha_kappa, verts.kappa_t(), verts.zero_t()],
                )
            } else {
                (
                    LesserCase::Pentagon,
                    vec![
                        origin,
                        corners.alpha_kappa,
                        corners.kappa_one,
                        verts.t_one(),
                        verts.zero_t(),
                    ],
                )
            }
        }
        RegionCase::Case3Triangle => {
            if c >= cost(corners.alpha_one, t) {
                triangle(&verts)
            } else {
                (
                    LesserCase::QuadAlphaOneT,
                    vec![origin, corners.alpha_one, verts.t_one(), verts.zero_t()],
                )
            }
        }
        _ => unreachable!("checked main case"),
    };
    Ok(PartialAreaResult::new(shape, vertices, region))
}

fn triangle(verts: &Vertices<'_>) -> (LesserCase, Vec<RocPoint>) {
    (
        LesserCase::TriangleAlphaT,
        vec![RocPoint::ORIGIN, verts.alpha_t(), verts.zero_t()],
    )
}

/// Moving vertices where the iso-line meets the region's boundary lines.
struct Vertices<'a> {
    point: RocPoint,
    t: f64,
    region: &'a FeasibleRegion,
}

impl<'a> Vertices<'a> {
    fn new(point: RocPoint, t: CostModel, region: &'a FeasibleRegion) -> Self {
        Self {
            point,
            t: t.t(),
            region,
        }
    }

    fn slope(&self) -> f64 {
        self.t / (1.0 - self.t)
    }

    fn zero_t(&self) -> RocPoint {
        RocPoint {
            fpr: 0.0,
            tpr: self.point.tpr - self.slope() * self.point.fpr,
        }
    }

    fn t_one(&self) -> RocPoint {
        let (h, k, t) = (self.point.fpr, self.point.tpr, self.t);
        RocPoint {
            fpr: (1.0 - t) * (1.0 - k) / t + h,
            tpr: 1.0,
        }
    }

    fn alpha_t(&self) -> RocPoint {
        let form = rational_linear_coeffs(self.point, self.region, VertexForm::AlphaT)
            .expect("precision form always exists");
        let profile = self.region.profile();
        let alpha = self.region.constraints().alpha();
        let x = form.eval(self.t);
        RocPoint {
            fpr: x,
            tpr: alpha * profile.neg() / ((1.0 - alpha) * profile.pos()) * x,
        }
    }

    fn kappa_t(&self) -> RocPoint {
        let profile = self.region.profile();
        let kappa = self.region.constraints().kappa();
        match rational_linear_coeffs(self.point, self.region, VertexForm::KappaT) {
            Some(form) => {
                let x = form.eval(self.t);
                RocPoint {
                    fpr: x,
                    tpr: (kappa - profile.neg() * x) / profile.pos(),
                }
            }
            None => {
                let iso = iso_line(self.point, CostModel::new(self.t).expect("valid t"));
                let capacity = Line::new(profile.neg(), profile.pos(), kappa);
                iso.line()
                    .intersect(&capacity)
                    .expect("iso-lines have nonnegative slope, the capacity line negative")
            }
        }
    }
}

fn lesser_half_plane(iso: &IsoLine) -> HalfPlane {
    HalfPlane(iso.line()).flipped()
}

fn clipped(point: RocPoint, t: CostModel, region: &FeasibleRegion) -> PartialAreaResult {
    let iso = iso_line(point, t);
    let mut poly = geometry::clip(region.vertices(), &lesser_half_plane(&iso));
    geometry::start_at_origin(&mut poly);
    PartialAreaResult::new(LesserCase::Clipped, poly, region)
}

/// Area of the part of `region` on one side of `line`: on or below it when
/// `keep_below` (the lesser side), on or above it otherwise.
pub fn clip_area_oracle(region: &FeasibleRegion, line: &IsoLine, keep_below: bool) -> f64 {
    let below = lesser_half_plane(line);
    let plane = if keep_below { below } else { below.flipped() };
    geometry::polygon_area(&geometry::clip(region.vertices(), &plane))
}

/// Partial area for any region with positive area: the four-shape
/// construction for the main cases, clipping otherwise.
pub fn lesser_area(
    point: RocPoint,
    t: CostModel,
    region: &FeasibleRegion,
) -> Result<PartialAreaResult> {
    if region.case().is_main_case() {
        return lesser_vertices(point, t, region);
    }
    if !region.contains(point) {
        return Err(Error::InfeasiblePoint {
            fpr: point.fpr,
            tpr: point.tpr,
        });
    }
    Ok(clipped(point, t, region))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::Constraints;
    use crate::roc::DatasetProfile;

    fn region(alpha: f64, kappa: f64) -> FeasibleRegion {
        FeasibleRegion::new(
            DatasetProfile::new(1000, 9000).unwrap(),
            Constraints::new(alpha, kappa).unwrap(),
        )
        .unwrap()
    }

    fn t(v: f64) -> CostModel {
        CostModel::new(v).unwrap()
    }

    fn pt(x: f64, y: f64) -> RocPoint {
        RocPoint { fpr: x, tpr: y }
    }

    #[test]
    fn case2_quadrilateral_example() {
        let r = region(0.15, 3000.0);
        let res = lesser_vertices(pt(0.1, 0.6), t(0.5), &r).unwrap();
        assert_eq!(res.case, LesserCase::QuadAlphaKappaT);
        let expected = [pt(0.0, 0.0), pt(0.85 / 3.0, 0.45), pt(0.25, 0.75), pt(0.0, 0.5)];
        for (a, e) in res.vertices.iter().zip(expected) {
            assert!((a.fpr - e.fpr).abs() < 1e-12 && (a.tpr - e.tpr).abs() < 1e-12);
        }
        assert!((res.area - 0.1125).abs() < 1e-12);
        // 0.1125 / (3.65e6 / 1.8e7)
        assert!((res.normalized - 0.1125 * 1.8e7 / 3.65e6).abs() < 1e-12);
        assert!((res.normalized - 0.554795).abs() < 1e-6);

        let oracle = clip_area_oracle(&r, &iso_line(pt(0.1, 0.6), t(0.5)), true);
        assert!((oracle - 0.1125).abs() < 1e-12);
    }

    #[test]
    fn never_alarm_is_empty_below() {
        let r = region(0.15, 3000.0);
        let res = lesser_vertices(RocPoint::ORIGIN, t(0.5), &r).unwrap();
        assert_eq!(res.case, LesserCase::EmptyBelow);
        assert_eq!(res.area, 0.0);
        assert_eq!(res.normalized, 0.0);
    }

    #[test]
    fn perfect_point_is_full_region() {
        let r = region(0.15, 3000.0);
        for tv in [0.0, 0.2, 0.5, 0.6] {
            let res = lesser_vertices(RocPoint::PERFECT, t(tv), &r).unwrap();
            assert_eq!(res.case, LesserCase::FullRegion);
            assert_eq!(res.area, r.area());
            assert_eq!(res.normalized, 1.0);
        }
    }

    #[test]
    fn oracle_extremes() {
        let r = region(0.15, 3000.0);
        // iso-line through (1,0) at t = 0.5 is y = x - 1, under the region
        let under = iso_line(pt(1.0, 0.0), t(0.5));
        assert_eq!(clip_area_oracle(&r, &under, true), 0.0);
        assert!((clip_area_oracle(&r, &under, false) - r.area()).abs() < 1e-15);
        // y = x + 1 lies above the region
        let over = iso_line(pt(0.0, 1.0), t(0.5));
        assert!((clip_area_oracle(&r, &over, true) - r.area()).abs() < 1e-15);
        let under_all = iso_line(pt(0.0, 0.0), t(0.1));
        assert!(clip_area_oracle(&r, &under_all, true) < 1e-15);
    }

    #[test]
    fn rational_forms_match_direct_intersection() {
        let r = region(0.15, 3000.0);
        let p = pt(0.1, 0.6);
        let alpha_form = rational_linear_coeffs(p, &r, VertexForm::AlphaT).unwrap();
        let kappa_form = rational_linear_coeffs(p, &r, VertexForm::KappaT).unwrap();
        let precision = crate::region::precision_line(r.profile(), 0.15).unwrap();
        let capacity = crate::region::capacity_line(r.profile(), 3000.0).unwrap();
        for tv in [0.0, 0.1, 0.3, 0.5, 0.6] {
            let iso = iso_line(p, t(tv)).line();
            let xa = iso.intersect(&precision).unwrap().fpr;
            let xk = iso.intersect(&capacity).unwrap().fpr;
            assert!((alpha_form.eval(tv) - xa).abs() < 1e-10, "t {tv}");
            assert!((kappa_form.eval(tv) - xk).abs() < 1e-10, "t {tv}");
        }
        // y = x + 0.5 against y = (27/17) x: (10/17) x = 0.5
        assert!((alpha_form.eval(0.5) - 0.85).abs() < 1e-12);
        assert!((kappa_form.eval(0.5) - 0.25).abs() < 1e-12);
        // t = 0: horizontal line y = k meets the precision line at k / slope
        assert!((alpha_form.eval(0.0) - 0.6 * 17.0 / 27.0).abs() < 1e-12);
    }

    #[test]
    fn kappa_form_degenerates_for_balanced_classes() {
        let r = FeasibleRegion::new(
            DatasetProfile::new(100, 100).unwrap(),
            Constraints::new(0.6, 80.0).unwrap(),
        )
        .unwrap();
        assert!(rational_linear_coeffs(pt(0.1, 0.3), &r, VertexForm::KappaT).is_none());
        // the quadrilateral case still works through the direct intersection
        let res = lesser_vertices(pt(0.1, 0.3), t(0.3), &r).unwrap();
        let oracle = clip_area_oracle(&r, &iso_line(pt(0.1, 0.3), t(0.3)), true);
        assert!((res.area - oracle).abs() < 1e-12);
    }

    #[test]
    fn all_four_shapes_agree_with_clipping() {
        let cases = [
            (region(0.15, 900.0), pt(0.02, 0.04), 0.3, LesserCase::TriangleAlphaT),
            (region(0.15, 900.0), pt(0.02, 0.7), 0.3, LesserCase::QuadAlphaKappaT),
            (region(0.15, 3000.0), pt(0.05, 0.95), 0.4, LesserCase::Pentagon),
            (region(0.15, 9100.0), pt(0.2, 0.9), 0.5, LesserCase::QuadAlphaOneT),
            (region(0.15, 9100.0), pt(0.2, 0.4), 0.5, LesserCase::TriangleAlphaT),
        ];
        for (r, p, tv, shape) in cases {
            let res = lesser_vertices(p, t(tv), &r).unwrap();
            assert_eq!(res.case, shape, "{p:?} at {tv}");
            let oracle = clip_area_oracle(&r, &iso_line(p, t(tv)), true);
            assert!((res.area - oracle).abs() < 1e-12, "{p:?}: {} vs {oracle}", res.area);
            assert!(geometry::signed_area(&res.vertices) > 0.0);
        }
    }

    #[test]
    fn above_never_alarm_bound_falls_back_to_clipping() {
        let r = region(0.15, 3000.0);
        let p = pt(0.1, 0.6);
        let res = lesser_vertices(p, t(0.9), &r).unwrap();
        assert_eq!(res.case, LesserCase::Clipped);
        let oracle = clip_area_oracle(&r, &iso_line(p, t(0.9)), true);
        assert!((res.area - oracle).abs() < 1e-15);
        // at t = 1 the lesser side is everything right of x = h
        let res = lesser_vertices(p, t(1.0), &r).unwrap();
        assert!(res.area > 0.0 && res.area < r.area());
    }

    #[test]
    fn errors() {
        let r = region(0.15, 3000.0);
        assert!(matches!(
            lesser_vertices(pt(0.9, 0.9), t(0.5), &r),
            Err(Error::InfeasiblePoint { .. })
        ));
        let low = FeasibleRegion::new(
            DatasetProfile::new(1000, 9000).unwrap(),
            Constraints::new(0.05, 9800.0).unwrap(),
        )
        .unwrap();
        assert_eq!(
            lesser_vertices(pt(0.1, 0.6), t(0.5), &low),
            Err(Error::UnsupportedCase(RegionCase::Case3APentagon))
        );
        // the generic entry point clips instead
        let res = lesser_area(pt(0.1, 0.6), t(0.5), &low).unwrap();
        assert_eq!(res.case, LesserCase::Clipped);
    }
}
