//! ROC-space primitives.
//!
//! Throughout, `fpr` is the false-positive rate `h` (the x axis) and `tpr` the
//! true-positive rate `k` (the y axis). A binarized classifier predicts
//! positive when `score >= threshold`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{Line, RATE_TOL};

/// Class counts of the evaluation dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DatasetProfile {
    n_pos: u64,
    n_neg: u64,
}

impl DatasetProfile {
    pub fn new(n_pos: u64, n_neg: u64) -> Result<Self> {
        if n_pos == 0 || n_neg == 0 {
            return Err(Error::InvalidCounts { n_pos, n_neg });
        }
        Ok(Self { n_pos, n_neg })
    }

    pub fn n_pos(&self) -> u64 {
        self.n_pos
    }

    pub fn n_neg(&self) -> u64 {
        self.n_neg
    }

    pub fn total(&self) -> u64 {
        self.n_pos + self.n_neg
    }

    /// Positive count as a float, for geometry.
    pub fn pos(&self) -> f64 {
        self.n_pos as f64
    }

    pub fn neg(&self) -> f64 {
        self.n_neg as f64
    }

    pub fn prevalence(&self) -> f64 {
        self.pos() / self.total() as f64
    }

    /// Number of predicted positives at an operating point.
    pub fn load(&self, p: RocPoint) -> f64 {
        self.pos() * p.tpr + self.neg() * p.fpr
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
}

impl RocPoint {
    pub const ORIGIN: RocPoint = RocPoint { fpr: 0.0, tpr: 0.0 };
    pub const ALWAYS_ALARM: RocPoint = RocPoint { fpr: 1.0, tpr: 1.0 };
    pub const PERFECT: RocPoint = RocPoint { fpr: 0.0, tpr: 1.0 };

    pub fn new(fpr: f64, tpr: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&fpr) || !(0.0..=1.0).contains(&tpr) {
            return Err(Error::PointOutOfRange { fpr, tpr });
        }
        Ok(Self { fpr, tpr })
    }

    pub fn midpoint(self, other: RocPoint) -> RocPoint {
        RocPoint {
            fpr: (self.fpr + other.fpr) / 2.0,
            tpr: (self.tpr + other.tpr) / 2.0,
        }
    }

    fn sort_key_cmp(&self, other: &RocPoint) -> Ordering {
        self.fpr
            .total_cmp(&other.fpr)
            .then(self.tpr.total_cmp(&other.tpr))
    }
}

/// Operating points of a scored classifier, sorted by `fpr` then `tpr`,
/// always running from `(0,0)` to `(1,1)`.
///
/// When built from scores, `thresholds[i]` is the cutoff that produces
/// `points[i]`: `+inf` for the never-alarm point and the lowest score for
/// `(1,1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    points: Vec<RocPoint>,
    thresholds: Option<Vec<f64>>,
    profile: Option<DatasetProfile>,
}

impl RocCurve {
    /// Builds a curve from raw operating points, e.g. values read off a
    /// published figure. Points are sorted and the endpoints `(0,0)` and
    /// `(1,1)` are added when missing (with thresholds `+inf` and `-inf`).
    pub fn from_points(points: Vec<RocPoint>, thresholds: Option<Vec<f64>>) -> Result<Self> {
        for p in &points {
            RocPoint::new(p.fpr, p.tpr)?;
        }
        if let Some(th) = &thresholds {
            if th.len() != points.len() {
                return Err(Error::ThresholdCount {
                    points: points.len(),
                    thresholds: th.len(),
                });
            }
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&i, &j| points[i].sort_key_cmp(&points[j]));
        let mut sorted: Vec<RocPoint> = order.iter().map(|&i| points[i]).collect();
        let mut sorted_th: Option<Vec<f64>> = thresholds
            .as_ref()
            .map(|th| order.iter().map(|&i| th[i]).collect());

        if sorted.first() != Some(&RocPoint::ORIGIN) {
            sorted.insert(0, RocPoint::ORIGIN);
            if let Some(th) = sorted_th.as_mut() {
                th.insert(0, f64::INFINITY);
            }
        }
        if sorted.last() != Some(&RocPoint::ALWAYS_ALARM) {
            sorted.push(RocPoint::ALWAYS_ALARM);
            if let Some(th) = sorted_th.as_mut() {
                th.push(f64::NEG_INFINITY);
            }
        }
        Ok(Self {
            points: sorted,
            thresholds: sorted_th,
            profile: None,
        })
    }

    pub fn points(&self) -> &[RocPoint] {
        &self.points
    }

    pub fn thresholds(&self) -> Option<&[f64]> {
        self.thresholds.as_deref()
    }

    /// Class counts, known when the curve was built from labelled scores.
    pub fn profile(&self) -> Option<DatasetProfile> {
        self.profile
    }

    pub fn threshold_of(&self, index: usize) -> Option<f64> {
        self.thresholds.as_ref().map(|th| th[index])
    }

    /// Trapezoidal area under the curve.
    pub fn auroc(&self) -> f64 {
        trapezoid_area(self.points.iter().copied())
    }
}

pub(crate) fn trapezoid_area(points: impl Iterator<Item = RocPoint>) -> f64 {
    let mut prev: Option<RocPoint> = None;
    let mut area = 0.0;
    for p in points {
        if let Some(q) = prev {
            area += (p.fpr - q.fpr) * (p.tpr + q.tpr) / 2.0;
        }
        prev = Some(p);
    }
    area
}

/// Sweeps the threshold from `+inf` down through every distinct score.
/// Examples sharing a score cross the threshold together.
pub fn build_roc_curve(scores: &[f64], labels: &[bool]) -> Result<RocCurve> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            scores: scores.len(),
            labels: labels.len(),
        });
    }
    if scores.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
        return Err(Error::NonFiniteScore(i));
    }
    let n_pos = labels.iter().filter(|&&l| l).count() as u64;
    let n_neg = labels.len() as u64 - n_pos;
    if n_pos == 0 {
        return Err(Error::MissingClass("positive"));
    }
    if n_neg == 0 {
        return Err(Error::MissingClass("negative"));
    }
    let profile = DatasetProfile::new(n_pos, n_neg)?;

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&i, &j| scores[j].total_cmp(&scores[i]));

    let mut points = Vec::with_capacity(scores.len() + 1);
    let mut thresholds = Vec::with_capacity(scores.len() + 1);
    points.push(RocPoint::ORIGIN);
    thresholds.push(f64::INFINITY);

    let (mut tp, mut fp) = (0u64, 0u64);
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        points.push(RocPoint {
            fpr: fp as f64 / n_neg as f64,
            tpr: tp as f64 / n_pos as f64,
        });
        thresholds.push(s);
    }

    Ok(RocCurve {
        points,
        thresholds: Some(thresholds),
        profile: Some(profile),
    })
}

/// A vertex of an upper hull, remembering which curve point it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HullVertex {
    pub point: RocPoint,
    /// Index into [`RocCurve::points`].
    pub source: usize,
}

/// Concave chain starting at `(0,0)`.
///
/// Slopes are strictly decreasing. The first segment may be vertical (on the
/// y axis) and the last may be horizontal.
#[derive(Debug, Clone, PartialEq)]
pub struct HullCurve {
    vertices: Vec<HullVertex>,
}

impl HullCurve {
    pub fn vertices(&self) -> &[HullVertex] {
        &self.vertices
    }

    pub fn points(&self) -> impl Iterator<Item = RocPoint> + '_ {
        self.vertices.iter().map(|v| v.point)
    }

    /// Wraps a chain that is already concave; used by tests and callers that
    /// carry hulls around without the originating curve.
    pub fn from_vertices(vertices: Vec<HullVertex>) -> Self {
        Self { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

fn cross(o: RocPoint, a: RocPoint, b: RocPoint) -> f64 {
    (a.fpr - o.fpr) * (b.tpr - o.tpr) - (a.tpr - o.tpr) * (b.fpr - o.fpr)
}

/// Monotone-chain upper hull of `(point, source)` pairs already sorted by
/// `fpr` then `tpr`. Linear time.
pub(crate) fn upper_chain(sorted: impl IntoIterator<Item = HullVertex>) -> Vec<HullVertex> {
    let mut stack: Vec<HullVertex> = Vec::new();
    for v in sorted {
        while stack.len() >= 2
            && cross(stack[stack.len() - 2].point, stack[stack.len() - 1].point, v.point) >= 0.0
        {
            stack.pop();
        }
        // the first vertex stays at the lowest point on the left edge
        if stack.len() == 1 && stack[0].point == v.point {
            continue;
        }
        stack.push(v);
    }
    stack
}

/// Upper convex hull of a curve, from `(0,0)` to `(1,1)`.
pub fn upper_hull(curve: &RocCurve) -> HullCurve {
    let chain = upper_chain(
        curve
            .points
            .iter()
            .enumerate()
            .map(|(source, &point)| HullVertex { point, source }),
    );
    HullCurve { vertices: chain }
}

/// Fractional cost parameter `t`: the share of total misclassification cost
/// carried by false positives.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CostModel(f64);

impl CostModel {
    pub fn new(t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidCostParameter(t));
        }
        Ok(Self(t))
    }

    pub fn t(&self) -> f64 {
        self.0
    }

    /// Inverse of [`t_from_cost_ratio`]: the ratio `C0/C1` that yields this `t`.
    pub fn cost_ratio(&self, profile: &DatasetProfile) -> f64 {
        self.0 * profile.pos() / ((1.0 - self.0) * profile.neg())
    }
}

/// Normalized cost `t*fpr + (1-t)*(1-tpr)`.
pub fn cost(point: RocPoint, t: CostModel) -> f64 {
    let t = t.0;
    t * point.fpr + (1.0 - t) * (1.0 - point.tpr)
}

/// Maps a false-positive to false-negative cost ratio `C0/C1` to `t`.
pub fn t_from_cost_ratio(ratio: f64, profile: &DatasetProfile) -> Result<CostModel> {
    if !ratio.is_finite() || ratio <= 0.0 {
        return Err(Error::NonPositiveRatio(ratio));
    }
    let weighted_neg = ratio * profile.neg();
    CostModel::new(weighted_neg / (weighted_neg + profile.pos()))
}

/// Iso-performance line through an anchor point: every point on it has the
/// anchor's cost.
///
/// Stored implicitly as `t*x - (1-t)*y = t*h - (1-t)*k`, so `t = 1` is the
/// vertical line `x = h` without special casing. Along the line's normal,
/// `t*x - (1-t)*y` equals `cost - (1 - t)`; larger values mean higher cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsoLine {
    line: Line,
    anchor: RocPoint,
    t: CostModel,
}

impl IsoLine {
    pub fn line(&self) -> Line {
        self.line
    }

    pub fn anchor(&self) -> RocPoint {
        self.anchor
    }

    pub fn t(&self) -> CostModel {
        self.t
    }

    /// `t/(1-t)`, infinite at `t = 1`.
    pub fn slope(&self) -> f64 {
        self.line.slope()
    }

    /// True when `p` costs at least as much as the anchor (lies on or below
    /// the line, or to its right when vertical).
    pub fn is_below(&self, p: RocPoint) -> bool {
        self.line.eval(p) >= -RATE_TOL
    }
}

pub fn iso_line(point: RocPoint, t: CostModel) -> IsoLine {
    let tv = t.t();
    let a = tv;
    let b = -(1.0 - tv);
    IsoLine {
        line: Line::new(a, b, a * point.fpr + b * point.tpr),
        anchor: point,
        t,
    }
}
