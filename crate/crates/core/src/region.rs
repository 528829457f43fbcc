//! The feasible region: ROC points meeting a minimum precision `alpha` and a
//! maximum number of predicted positives `kappa`.
//!
//! In ROC space the precision bound is the half-plane above the line
//! `alpha*N*x = (1-alpha)*P*y` through the origin, and the capacity bound is
//! the half-plane below `N*x + P*y = kappa`. Their intersection with the unit
//! square is a convex polygon whose shape falls into a handful of cases.
//!
//! Vertex names follow the boundary lines they sit on. `v_ak` is the meeting
//! point of the precision and capacity lines, `v_a1` is where the precision
//! line meets `y = 1`, `v_1a` where it meets `x = 1`, and so on.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{self, HalfPlane, Line, RATE_TOL};
use crate::roc::{DatasetProfile, RocPoint};

/// Tolerance on predicted-positive counts in feasibility checks.
pub const COUNT_TOL: f64 = 1e-9;

/// Minimum precision and maximum capacity (absolute count of predicted positives).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraints {
    alpha: f64,
    kappa: f64,
}

impl Constraints {
    pub fn new(alpha: f64, kappa: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidAlpha(alpha));
        }
        if kappa.is_nan() || kappa < 0.0 {
            return Err(Error::InvalidKappa(kappa));
        }
        Ok(Self { alpha, kappa })
    }

    /// Capacity given as a fraction of the dataset size.
    pub fn with_kappa_fraction(alpha: f64, fraction: f64, profile: &DatasetProfile) -> Result<Self> {
        if fraction.is_nan() || fraction < 0.0 {
            return Err(Error::InvalidKappa(fraction));
        }
        Self::new(alpha, fraction * profile.total() as f64)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Checks the regime where the three main polygon cases apply: negatives
    /// outnumber positives, `prevalence < alpha < 1` and
    /// `0 < kappa < |D|`. Returns a description of the first violated
    /// condition.
    pub fn check_practical(&self, profile: &DatasetProfile) -> core::result::Result<(), Violation> {
        if profile.n_pos() >= profile.n_neg() {
            return Err(Violation::ClassBalance {
                n_pos: profile.n_pos(),
                n_neg: profile.n_neg(),
            });
        }
        let p = profile.prevalence();
        if !(self.alpha > p && self.alpha < 1.0) {
            return Err(Violation::Precision {
                alpha: self.alpha,
                prevalence: p,
            });
        }
        let total = profile.total() as f64;
        if !(self.kappa > 0.0 && self.kappa < total) {
            return Err(Violation::Capacity {
                kappa: self.kappa,
                total,
            });
        }
        Ok(())
    }

    /// Largest `t` at which the never-alarm point still has maximal cost in
    /// the region: `alpha*N / (alpha*N + (1-alpha)*P)`. `None` without an
    /// active precision bound.
    pub fn never_alarm_bound(&self, profile: &DatasetProfile) -> Option<f64> {
        if self.alpha <= 0.0 || self.alpha >= 1.0 {
            return None;
        }
        let an = self.alpha * profile.neg();
        Some(an / (an + (1.0 - self.alpha) * profile.pos()))
    }
}

/// A violated practical assumption, with the offending values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    ClassBalance { n_pos: u64, n_neg: u64 },
    Precision { alpha: f64, prevalence: f64 },
    Capacity { kappa: f64, total: f64 },
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Violation::ClassBalance { n_pos, n_neg } => write!(
                f,
                "negatives must outnumber positives (|P| = {n_pos}, |N| = {n_neg})"
            ),
            Violation::Precision { alpha, prevalence } => write!(
                f,
                "minimum precision must satisfy prevalence < alpha < 1 \
                 (alpha = {alpha}, prevalence = {prevalence})"
            ),
            Violation::Capacity { kappa, total } => write!(
                f,
                "capacity must satisfy 0 < kappa < |D| (kappa = {kappa}, |D| = {total})"
            ),
        }
    }
}

/// Shape of the feasible region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionCase {
    /// `kappa < |P|`: triangle `(0,0), v_ak, v_0k`.
    Case1Triangle,
    /// `|P| <= kappa < |P|/alpha`: quadrilateral `(0,0), v_ak, v_k1, (0,1)`.
    Case2Quadrilateral,
    /// `kappa >= |P|/alpha`: triangle `(0,0), v_a1, (0,1)`; capacity does not bind.
    Case3Triangle,
    /// Low precision bound, `v_ak` right of `x = 1` and `(0,1)` feasible.
    Case3APentagon,
    /// Low precision bound, `v_ak` right of `x = 1` and `(0,1)` infeasible.
    Case3BTrapezoid,
    /// Only the precision bound cuts the square (`kappa >= |D|`).
    DegeneratePrecisionOnly,
    /// Only the capacity bound cuts the square (`alpha = 0`).
    DegenerateCapacityOnly,
    /// `kappa = 0`: only the never-alarm point.
    DegeneratePoint,
    /// `alpha = 1`: the segment of the y axis below `min(1, kappa/|P|)`.
    DegenerateSegment,
    /// Neither bound cuts the square; the region is all of ROC space.
    Empty,
}

impl RegionCase {
    /// The three shapes of the practical regime.
    pub fn is_main_case(&self) -> bool {
        matches!(
            self,
            RegionCase::Case1Triangle | RegionCase::Case2Quadrilateral | RegionCase::Case3Triangle
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            RegionCase::Case1Triangle => "Case1Triangle",
            RegionCase::Case2Quadrilateral => "Case2Quadrilateral",
            RegionCase::Case3Triangle => "Case3Triangle",
            RegionCase::Case3APentagon => "Case3APentagon",
            RegionCase::Case3BTrapezoid => "Case3BTrapezoid",
            RegionCase::DegeneratePrecisionOnly => "DegeneratePrecisionOnly",
            RegionCase::DegenerateCapacityOnly => "DegenerateCapacityOnly",
            RegionCase::DegeneratePoint => "DegeneratePoint",
            RegionCase::DegenerateSegment => "DegenerateSegment",
            RegionCase::Empty => "Empty",
        }
    }
}

/// Precision line `alpha*N*x - (1-alpha)*P*y = 0`; feasible points lie on or above it.
pub fn precision_line(profile: &DatasetProfile, alpha: f64) -> Result<Line> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(Line::new(
        alpha * profile.neg(),
        -(1.0 - alpha) * profile.pos(),
        0.0,
    ))
}

/// Capacity line `N*x + P*y = kappa`; feasible points lie on or below it.
pub fn capacity_line(profile: &DatasetProfile, kappa: f64) -> Result<Line> {
    if kappa.is_nan() || kappa < 0.0 {
        return Err(Error::InvalidKappa(kappa));
    }
    Ok(Line::new(profile.neg(), profile.pos(), kappa))
}

fn half_planes(profile: &DatasetProfile, c: &Constraints) -> [HalfPlane; 2] {
    [
        HalfPlane(precision_line(profile, c.alpha).expect("validated alpha")),
        HalfPlane(capacity_line(profile, c.kappa).expect("validated kappa")),
    ]
}

/// Whether an operating point meets both bounds. The origin always does:
/// with no predictions the precision bound holds vacuously.
pub fn is_feasible(point: RocPoint, profile: &DatasetProfile, constraints: &Constraints) -> bool {
    if point == RocPoint::ORIGIN {
        return true;
    }
    let alpha = constraints.alpha;
    let precision_ok = if alpha >= 1.0 {
        point.fpr <= RATE_TOL
    } else {
        let slope = alpha * profile.neg() / ((1.0 - alpha) * profile.pos());
        point.tpr >= slope * point.fpr - RATE_TOL
    };
    precision_ok && profile.load(point) <= constraints.kappa + COUNT_TOL
}

pub fn classify_region(profile: &DatasetProfile, constraints: &Constraints) -> RegionCase {
    let (alpha, kappa) = (constraints.alpha, constraints.kappa);
    let (pos, neg) = (profile.pos(), profile.neg());
    let total = profile.total() as f64;

    if kappa <= 0.0 {
        return RegionCase::DegeneratePoint;
    }
    if alpha >= 1.0 {
        return RegionCase::DegenerateSegment;
    }
    let precision_cuts = alpha > 0.0;
    let capacity_cuts = kappa < total;
    match (precision_cuts, capacity_cuts) {
        (false, false) => return RegionCase::Empty,
        (false, true) => return RegionCase::DegenerateCapacityOnly,
        (true, false) => return RegionCase::DegeneratePrecisionOnly,
        (true, true) => {}
    }

    // where the precision line leaves the square: through y = 1 when its
    // slope is at least 1, through x = 1 otherwise
    let exits_top = alpha * neg >= (1.0 - alpha) * pos;
    if exits_top {
        if alpha * kappa >= pos {
            RegionCase::Case3Triangle
        } else if kappa < pos {
            RegionCase::Case1Triangle
        } else {
            RegionCase::Case2Quadrilateral
        }
    } else if (1.0 - alpha) * kappa <= neg {
        if kappa < pos {
            RegionCase::Case1Triangle
        } else {
            RegionCase::Case2Quadrilateral
        }
    } else if kappa >= pos {
        RegionCase::Case3APentagon
    } else {
        RegionCase::Case3BTrapezoid
    }
}

/// Named boundary vertices of a region.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Corners {
    /// precision line meets capacity line
    pub alpha_kappa: RocPoint,
    /// precision line meets y = 1
    pub alpha_one: RocPoint,
    /// capacity line meets y = 1
    pub kappa_one: RocPoint,
    /// capacity line meets x = 0
    pub zero_kappa: RocPoint,
    /// precision line meets x = 1
    pub one_alpha: RocPoint,
    /// capacity line meets x = 1
    pub one_kappa: RocPoint,
}

impl Corners {
    pub fn new(profile: &DatasetProfile, constraints: &Constraints) -> Self {
        let (alpha, kappa) = (constraints.alpha, constraints.kappa);
        let (pos, neg) = (profile.pos(), profile.neg());
        Self {
            alpha_kappa: RocPoint {
                fpr: (1.0 - alpha) * kappa / neg,
                tpr: alpha * kappa / pos,
            },
            alpha_one: RocPoint {
                fpr: (1.0 - alpha) * pos / (alpha * neg),
                tpr: 1.0,
            },
            kappa_one: RocPoint {
                fpr: (kappa - pos) / neg,
                tpr: 1.0,
            },
            zero_kappa: RocPoint {
                fpr: 0.0,
                tpr: kappa / pos,
            },
            one_alpha: RocPoint {
                fpr: 1.0,
                tpr: alpha * neg / ((1.0 - alpha) * pos),
            },
            one_kappa: RocPoint {
                fpr: 1.0,
                tpr: (kappa - neg) / pos,
            },
        }
    }
}

/// A feasible region with positive area.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleRegion {
    case: RegionCase,
    vertices: Vec<RocPoint>,
    area: f64,
    profile: DatasetProfile,
    constraints: Constraints,
}

impl FeasibleRegion {
    /// Same as [`region_polygon`].
    pub fn new(profile: DatasetProfile, constraints: Constraints) -> Result<Self> {
        region_polygon(&profile, &constraints)
    }

    /// All of ROC space: no precision bound and capacity `|D|`.
    pub fn unconstrained(profile: DatasetProfile) -> Self {
        let constraints = Constraints {
            alpha: 0.0,
            kappa: profile.total() as f64,
        };
        Self {
            case: RegionCase::Empty,
            vertices: geometry::unit_square(),
            area: 1.0,
            profile,
            constraints,
        }
    }

    pub fn case(&self) -> RegionCase {
        self.case
    }

    /// Counterclockwise, starting at `(0,0)`.
    pub fn vertices(&self) -> &[RocPoint] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn profile(&self) -> &DatasetProfile {
        &self.profile
    }

    pub fn constraints(&self) -> &Constraints {
        &self.constraints
    }

    pub fn contains(&self, point: RocPoint) -> bool {
        is_feasible(point, &self.profile, &self.constraints)
    }

    pub fn never_alarm_bound(&self) -> Option<f64> {
        self.constraints.never_alarm_bound(&self.profile)
    }

    pub(crate) fn corners(&self) -> Corners {
        Corners::new(&self.profile, &self.constraints)
    }
}

/// Unit square intersected with the precision and capacity half-planes.
///
/// Serves every case uniformly and is the reference the per-case vertex
/// lists are checked against. Counterclockwise, starting at the origin.
pub fn half_plane_polygon(profile: &DatasetProfile, constraints: &Constraints) -> Vec<RocPoint> {
    let mut poly = geometry::unit_square();
    for plane in half_planes(profile, constraints) {
        poly = geometry::clip(&poly, &plane);
    }
    geometry::start_at_origin(&mut poly);
    poly
}

/// Builds the region polygon from the per-case vertex lists (or the
/// half-plane construction for cases without one) and its shoelace area.
pub fn region_polygon(profile: &DatasetProfile, constraints: &Constraints) -> Result<FeasibleRegion> {
    let case = classify_region(profile, constraints);
    let corners = Corners::new(profile, constraints);
    let origin = RocPoint::ORIGIN;
    let mut vertices = match case {
        RegionCase::DegeneratePoint | RegionCase::DegenerateSegment => {
            return Err(Error::DegenerateRegion(case))
        }
        RegionCase::Case1Triangle => vec![origin, corners.alpha_kappa, corners.zero_kappa],
        RegionCase::Case2Quadrilateral => vec![
            origin,
            corners.alpha_kappa,
            corners.kappa_one,
            RocPoint::PERFECT,
        ],
        RegionCase::Case3Triangle => vec![origin, corners.alpha_one, RocPoint::PERFECT],
        RegionCase::Case3APentagon => vec![
            origin,
            corners.one_alpha,
            corners.one_kappa,
            corners.kappa_one,
            RocPoint::PERFECT,
        ],
        RegionCase::Case3BTrapezoid => vec![
            origin,
            corners.one_alpha,
            corners.one_kappa,
            corners.zero_kappa,
        ],
        RegionCase::DegeneratePrecisionOnly
        | RegionCase::DegenerateCapacityOnly
        | RegionCase::Empty => half_plane_polygon(profile, constraints),
    };
    geometry::dedup_ring(&mut vertices);
    let area = geometry::polygon_area(&vertices);
    if vertices.len() < 3 || area <= 0.0 {
        return Err(Error::DegenerateRegion(case));
    }
    Ok(FeasibleRegion {
        case,
        vertices,
        area,
        profile: *profile,
        constraints: *constraints,
    })
}

/// Closed-form area for the three main cases:
///
/// - case 1: `(1-alpha)*kappa^2 / (2*N*P)`
/// - case 2: `(2*kappa*P - alpha*kappa^2 - P^2) / (2*N*P)`
/// - case 3: `(1-alpha)*P / (2*alpha*N)`
pub fn region_area_closed_form(profile: &DatasetProfile, constraints: &Constraints) -> Result<f64> {
    let (alpha, kappa) = (constraints.alpha, constraints.kappa);
    let (pos, neg) = (profile.pos(), profile.neg());
    match classify_region(profile, constraints) {
        RegionCase::Case1Triangle => Ok((1.0 - alpha) * kappa * kappa / (2.0 * neg * pos)),
        RegionCase::Case2Quadrilateral => {
            Ok((2.0 * kappa * pos - alpha * kappa * kappa - pos * pos) / (2.0 * neg * pos))
        }
        RegionCase::Case3Triangle => Ok((1.0 - alpha) * pos / (2.0 * alpha * neg)),
        other => Err(Error::UnsupportedCase(other)),
    }
}
