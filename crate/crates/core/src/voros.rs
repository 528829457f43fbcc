//! Partial VOROS: the best normalized partial area a scored classifier can
//! reach at each cost parameter `t`, averaged over a distribution of `t`.
//!
//! For a fixed `t` the best threshold is the feasible operating point of
//! lowest cost, since lesser area shrinks as cost grows. Those points lie on
//! the upper hull of the feasible curve points, and each hull vertex is
//! optimal on an interval of `t` bounded by the slopes of its two segments
//! (a segment of slope `s` maps to the breakpoint `t = s / (1 + s)`).
//!
//! Averages over `t` are composite-trapezoid integrals for a uniform `t`
//! range, or seeded Monte Carlo means when `t` is induced by a uniform
//! distribution over the cost ratio `C0/C1`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::partial_area::lesser_area;
use crate::region::FeasibleRegion;
use crate::roc::{
    t_from_cost_ratio, upper_chain, CostModel, DatasetProfile, HullCurve, HullVertex, RocCurve,
    RocPoint,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CostKind {
    /// `t` uniform on `[a, b]`.
    UniformT { a: f64, b: f64 },
    /// `C0/C1` uniform on `[low, high]`, mapped to `t` through the class counts.
    CostRatio {
        low: f64,
        high: f64,
        profile: DatasetProfile,
    },
}

/// Distribution over the cost parameter plus the numerical settings used to
/// average over it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostSpec {
    kind: CostKind,
    resolution: usize,
    samples: usize,
    seed: u64,
}

/// Mean of a quantity over a [`CostSpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    /// Standard error of the Monte Carlo mean; `None` for quadrature.
    pub std_error: Option<f64>,
}

impl CostSpec {
    pub const DEFAULT_RESOLUTION: usize = 1025;
    pub const DEFAULT_SAMPLES: usize = 100_000;
    pub const DEFAULT_SEED: u64 = 0;

    pub fn uniform_t(a: f64, b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
            return Err(Error::InvalidCostSpec("t range must lie within [0, 1]"));
        }
        if a >= b {
            return Err(Error::InvalidCostSpec("t range needs a < b"));
        }
        Ok(Self::with_kind(CostKind::UniformT { a, b }))
    }

    pub fn cost_ratio(low: f64, high: f64, profile: DatasetProfile) -> Result<Self> {
        if !(low.is_finite() && high.is_finite()) || low <= 0.0 {
            return Err(Error::InvalidCostSpec("cost ratio bounds must be finite and positive"));
        }
        if low >= high {
            return Err(Error::InvalidCostSpec("cost ratio range needs low < high"));
        }
        Ok(Self::with_kind(CostKind::CostRatio { low, high, profile }))
    }

    fn with_kind(kind: CostKind) -> Self {
        Self {
            kind,
            resolution: Self::DEFAULT_RESOLUTION,
            samples: Self::DEFAULT_SAMPLES,
            seed: Self::DEFAULT_SEED,
        }
    }

    /// Number of trapezoid nodes, endpoints included.
    pub fn with_resolution(mut self, nodes: usize) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::InvalidCostSpec("resolution needs at least 2 nodes"));
        }
        self.resolution = nodes;
        Ok(self)
    }

    pub fn with_samples(mut self, samples: usize) -> Result<Self> {
        if samples < 2 {
            return Err(Error::InvalidCostSpec("Monte Carlo needs at least 2 samples"));
        }
        self.samples = samples;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn kind(&self) -> &CostKind {
        &self.kind
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_monte_carlo(&self) -> bool {
        matches!(self.kind, CostKind::CostRatio { .. })
    }

    /// Smallest and largest `t` the distribution can produce.
    pub fn t_support(&self) -> (f64, f64) {
        match self.kind {
            CostKind::UniformT { a, b } => (a, b),
            CostKind::CostRatio { low, high, profile } => (
                t_from_cost_ratio(low, &profile).expect("validated ratio").t(),
                t_from_cost_ratio(high, &profile).expect("validated ratio").t(),
            ),
        }
    }

    /// Rejects distributions reaching past the region's never-alarm bound.
    pub fn check_region(&self, region: &FeasibleRegion) -> Result<()> {
        if let Some(bound) = region.never_alarm_bound() {
            let (_, hi) = self.t_support();
            if hi > bound {
                return Err(Error::NeverAlarmBound { t: hi, bound });
            }
        }
        Ok(())
    }

    /// Quadrature nodes for a uniform `t` range; empty for Monte Carlo specs.
    pub fn nodes(&self) -> Vec<f64> {
        match self.kind {
            CostKind::UniformT { a, b } => trapezoid_nodes(a, b, self.resolution),
            CostKind::CostRatio { .. } => Vec::new(),
        }
    }

    /// Seeded stream of `t` samples for Monte Carlo specs; empty otherwise.
    pub fn samples_iter(&self) -> impl Iterator<Item = f64> + '_ {
        let (low, high, profile, n) = match self.kind {
            CostKind::CostRatio { low, high, profile } => (low, high, Some(profile), self.samples),
            CostKind::UniformT { .. } => (0.0, 1.0, None, 0),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..n).map(move |_| {
            let ratio = rng.random_range(low..high);
            t_from_cost_ratio(ratio, profile.as_ref().expect("cost-ratio spec"))
                .expect("positive ratio")
                .t()
        })
    }

    /// Mean of `f` over the distribution of `t`.
    pub fn try_integrate<F>(&self, mut f: F) -> Result<Estimate>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        match self.kind {
            CostKind::UniformT { .. } => {
                let nodes = self.nodes();
                let last = nodes.len() - 1;
                let mut sum = 0.0;
                for (i, &t) in nodes.iter().enumerate() {
                    let w = if i == 0 || i == last { 0.5 } else { 1.0 };
                    sum += w * f(t)?;
                }
                Ok(Estimate {
                    mean: sum / last as f64,
                    std_error: None,
                })
            }
            CostKind::CostRatio { .. } => {
                // Welford
                let mut n = 0usize;
                let mut mean = 0.0;
                let mut m2 = 0.0;
                for t in self.samples_iter() {
                    let x = f(t)?;
                    n += 1;
                    let delta = x - mean;
                    mean += delta / n as f64;
                    m2 += delta * (x - mean);
                }
                let var = m2 / (n - 1) as f64;
                Ok(Estimate {
                    mean,
                    std_error: Some(libm::sqrt(var / n as f64)),
                })
            }
        }
    }
}

fn trapezoid_nodes(a: f64, b: f64, n: usize) -> Vec<f64> {
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + step * i as f64 })
        .collect()
}

/// A hull vertex together with the `t` interval on which it has the lowest
/// cost among feasible hull vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalRange {
    pub point: RocPoint,
    /// Index of the point in the originating curve.
    pub source: usize,
    pub t_low: f64,
    pub t_high: f64,
}

/// Upper hull of the feasible curve points, cut after its highest vertex.
///
/// Hulling only the feasible points matters: a feasible point can sit under
/// a hull segment whose far end is infeasible and still be the cheapest
/// feasible choice.
pub fn feasible_hull(curve: &RocCurve, region: &FeasibleRegion) -> HullCurve {
    let feasible = curve
        .points()
        .iter()
        .enumerate()
        .filter(|(_, p)| region.contains(**p))
        .map(|(source, &point)| HullVertex { point, source });
    HullCurve::from_vertices(truncate_at_top(upper_chain(feasible)))
}

fn truncate_at_top(mut chain: Vec<HullVertex>) -> Vec<HullVertex> {
    while chain.len() >= 2 && chain[chain.len() - 1].point.tpr <= chain[chain.len() - 2].point.tpr
    {
        chain.pop();
    }
    chain
}

/// Cost-optimal `t` interval of every useful feasible vertex of `hull`,
/// ordered along the chain (so by decreasing `t`). Intervals of zero width
/// are dropped; together the rest cover `[0, 1]`.
pub fn optimal_t_ranges(hull: &HullCurve, region: &FeasibleRegion) -> Vec<OptimalRange> {
    let chain = truncate_at_top(upper_chain(
        hull.vertices()
            .iter()
            .copied()
            .filter(|v| region.contains(v.point)),
    ));
    if chain.is_empty() {
        return Vec::new();
    }
    let breakpoints: Vec<f64> = chain
        .windows(2)
        .map(|w| {
            let dx = w[1].point.fpr - w[0].point.fpr;
            let dy = w[1].point.tpr - w[0].point.tpr;
            dy / (dx + dy)
        })
        .collect();
    let mut ranges = Vec::with_capacity(chain.len());
    for (i, v) in chain.iter().enumerate() {
        let t_high = if i == 0 { 1.0 } else { breakpoints[i - 1] };
        let t_low = breakpoints.get(i).copied().unwrap_or(0.0);
        if t_low < t_high || chain.len() == 1 {
            ranges.push(OptimalRange {
                point: v.point,
                source: v.source,
                t_low,
                t_high,
            });
        }
    }
    ranges
}

/// The range whose vertex is optimal at `t`; ties at a breakpoint go to the
/// vertex with smaller `fpr`.
pub(crate) fn range_at(ranges: &[OptimalRange], t: f64) -> &OptimalRange {
    let i = ranges.partition_point(|r| r.t_low > t);
    &ranges[i.min(ranges.len() - 1)]
}

/// Normalized lesser area of the vertex that is optimal at `t`, where
/// `ranges` comes from [`optimal_t_ranges`] and is non-empty.
pub fn best_normalized_area(ranges: &[OptimalRange], region: &FeasibleRegion, t: f64) -> Result<f64> {
    let best = range_at(ranges, t);
    Ok(lesser_area(best.point, CostModel::new(t)?, region)?.normalized)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VorosValue {
    pub value: f64,
    /// Monte Carlo standard error, `None` for quadrature.
    pub std_error: Option<f64>,
    /// Set when no threshold other than never-alarm is feasible; the value
    /// is then 0.
    pub no_feasible_operating_point: bool,
}

fn only_never_alarm(ranges: &[OptimalRange]) -> bool {
    ranges.iter().all(|r| r.point == RocPoint::ORIGIN)
}

fn average_best_area(
    ranges: &[OptimalRange],
    region: &FeasibleRegion,
    spec: &CostSpec,
) -> Result<VorosValue> {
    let no_feasible = only_never_alarm(ranges);
    let est = spec.try_integrate(|t| best_normalized_area(ranges, region, t))?;
    Ok(VorosValue {
        value: est.mean,
        std_error: est.std_error,
        no_feasible_operating_point: no_feasible,
    })
}

/// Partial VOROS of a curve in a feasible region.
pub fn partial_voros(curve: &RocCurve, region: &FeasibleRegion, spec: &CostSpec) -> Result<VorosValue> {
    spec.check_region(region)?;
    let ranges = optimal_t_ranges(&feasible_hull(curve, region), region);
    average_best_area(&ranges, region, spec)
}

/// VOROS over all of ROC space, ignoring precision and capacity.
pub fn voros_unconstrained(
    curve: &RocCurve,
    profile: DatasetProfile,
    spec: &CostSpec,
) -> Result<VorosValue> {
    let square = FeasibleRegion::unconstrained(profile);
    let ranges = optimal_t_ranges(&feasible_hull(curve, &square), &square);
    average_best_area(&ranges, &square, spec)
}

/// One piece of a threshold policy: on `[t_low, t_high]` alert when
/// `score >= threshold`, which operates at `point` on the validation curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyEntry {
    pub t_low: f64,
    pub t_high: f64,
    pub point: RocPoint,
    pub threshold: f64,
}

/// Piecewise-constant map from `t` to a binarization threshold, ordered by
/// increasing `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdPolicy {
    entries: Vec<PolicyEntry>,
    no_feasible_operating_point: bool,
}

impl ThresholdPolicy {
    /// A single threshold over the whole support of `spec`.
    pub fn constant(point: RocPoint, threshold: f64, spec: &CostSpec) -> Self {
        let (t_low, t_high) = spec.t_support();
        Self {
            entries: alloc::vec![PolicyEntry {
                t_low,
                t_high,
                point,
                threshold,
            }],
            no_feasible_operating_point: point == RocPoint::ORIGIN,
        }
    }

    pub fn from_entries(entries: Vec<PolicyEntry>) -> Self {
        let no_feasible = entries.iter().all(|e| e.point == RocPoint::ORIGIN);
        Self {
            entries,
            no_feasible_operating_point: no_feasible,
        }
    }

    pub fn entries(&self) -> &[PolicyEntry] {
        &self.entries
    }

    /// Set when the policy can only ever choose never-alarm.
    pub fn no_feasible_operating_point(&self) -> bool {
        self.no_feasible_operating_point
    }

    /// Index of the entry in force at `t`; `t` outside the support snaps to
    /// the nearest entry.
    pub fn entry_index(&self, t: f64) -> Option<usize> {
        if self.entries.is_empty() {
            return None;
        }
        let i = self.entries.partition_point(|e| e.t_high < t);
        Some(i.min(self.entries.len() - 1))
    }

    pub fn threshold_at(&self, t: f64) -> Option<f64> {
        self.entry_index(t).map(|i| self.entries[i].threshold)
    }
}

/// Cost-optimal feasible threshold for every `t` in the support of `spec`.
pub fn threshold_policy(
    curve: &RocCurve,
    region: &FeasibleRegion,
    spec: &CostSpec,
) -> Result<ThresholdPolicy> {
    let thresholds = curve.thresholds().ok_or(Error::MissingThresholds)?;
    spec.check_region(region)?;
    let (lo, hi) = spec.t_support();
    let ranges = optimal_t_ranges(&feasible_hull(curve, region), region);
    let mut entries: Vec<PolicyEntry> = ranges
        .iter()
        .filter_map(|r| {
            let t_low = r.t_low.max(lo);
            let t_high = r.t_high.min(hi);
            (t_low < t_high).then_some(PolicyEntry {
                t_low,
                t_high,
                point: r.point,
                threshold: thresholds[r.source],
            })
        })
        .collect();
    entries.reverse();
    Ok(ThresholdPolicy::from_entries(entries))
}
