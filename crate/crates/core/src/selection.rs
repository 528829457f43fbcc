//! Choosing one classifier (and its thresholds) among many candidates, and
//! scoring the choice on held-out data.
//!
//! Four strategies are supported. Two are cost aware and produce a
//! threshold for every `t`; two ignore `t` and deploy one fixed threshold.
//! Whatever the strategy, deployment only ever uses validation thresholds
//! whose operating points satisfy the precision and capacity limits.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::region::{Constraints, FeasibleRegion};
use crate::roc::{build_roc_curve, cost, trapezoid_area, CostModel, DatasetProfile, RocCurve, RocPoint};
use crate::voros::{
    partial_voros, threshold_policy, voros_unconstrained, CostSpec, ThresholdPolicy,
};

/// Scores with binary labels, as seen on a test split.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledScores {
    scores: Vec<f64>,
    labels: Vec<bool>,
    profile: DatasetProfile,
}

impl LabeledScores {
    pub fn new(scores: Vec<f64>, labels: Vec<bool>) -> Result<Self> {
        // same validation as curve construction
        let profile = build_roc_curve(&scores, &labels)?
            .profile()
            .expect("curves built from scores carry a profile");
        Ok(Self {
            scores,
            labels,
            profile,
        })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn profile(&self) -> DatasetProfile {
        self.profile
    }

    /// Operating point when alerting on `score >= threshold`.
    pub fn rates_at(&self, threshold: f64) -> RocPoint {
        let (mut tp, mut fp) = (0u64, 0u64);
        for (&s, &l) in self.scores.iter().zip(&self.labels) {
            if s >= threshold {
                if l {
                    tp += 1;
                } else {
                    fp += 1;
                }
            }
        }
        RocPoint {
            fpr: fp as f64 / self.profile.neg(),
            tpr: tp as f64 / self.profile.pos(),
        }
    }

    pub fn curve(&self) -> RocCurve {
        build_roc_curve(&self.scores, &self.labels).expect("validated on construction")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub name: String,
    pub validation: RocCurve,
    pub test: Option<LabeledScores>,
}

impl Candidate {
    pub fn new(name: impl Into<String>, validation: RocCurve) -> Self {
        Self {
            name: name.into(),
            validation,
            test: None,
        }
    }

    pub fn with_test(mut self, test: LabeledScores) -> Self {
        self.test = Some(test);
        self
    }
}

/// Non-empty list of uniquely named candidates.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    candidates: Vec<Candidate>,
}

impl CandidateSet {
    pub fn new(candidates: Vec<Candidate>) -> Result<Self> {
        if candidates.is_empty() {
            return Err(Error::NoCandidates);
        }
        for (i, c) in candidates.iter().enumerate() {
            if candidates[..i].iter().any(|o| o.name == c.name) {
                return Err(Error::DuplicateName(c.name.clone()));
            }
        }
        Ok(Self { candidates })
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.candidates.iter().map(|c| c.name.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    MaxPV,
    MaxVOROS,
    MaxFeasibleRecall,
    MaxFeasiblePAUROC,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::MaxPV,
        Strategy::MaxVOROS,
        Strategy::MaxFeasibleRecall,
        Strategy::MaxFeasiblePAUROC,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::MaxPV => "max_pv",
            Strategy::MaxVOROS => "max_voros",
            Strategy::MaxFeasibleRecall => "max_feasible_recall",
            Strategy::MaxFeasiblePAUROC => "max_feasible_pauroc",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Whether the strategy picks a threshold per `t`.
    pub fn is_cost_aware(&self) -> bool {
        matches!(self, Strategy::MaxPV | Strategy::MaxVOROS)
    }
}

/// Highest recall among feasible curve points; 0 when only never-alarm is
/// feasible.
pub fn feasible_recall(curve: &RocCurve, region: &FeasibleRegion) -> f64 {
    curve
        .points()
        .iter()
        .filter(|p| region.contains(**p))
        .map(|p| p.tpr)
        .fold(0.0, f64::max)
}

/// Trapezoidal area under the feasible curve points, from the origin to the
/// largest feasible false-positive rate.
pub fn feasible_pauroc(curve: &RocCurve, region: &FeasibleRegion) -> f64 {
    trapezoid_area(curve.points().iter().copied().filter(|p| region.contains(*p)))
}

/// Index of the feasible point with highest recall, lowest fpr among ties.
fn recall_point(curve: &RocCurve, region: &FeasibleRegion) -> usize {
    let mut best = 0;
    for (i, p) in curve.points().iter().enumerate() {
        if !region.contains(*p) {
            continue;
        }
        let b = curve.points()[best];
        if p.tpr > b.tpr || (p.tpr == b.tpr && p.fpr < b.fpr) {
            best = i;
        }
    }
    best
}

/// Index of the feasible point nearest to the perfect classifier.
fn knee_point(curve: &RocCurve, region: &FeasibleRegion) -> usize {
    let dist = |p: RocPoint| p.fpr * p.fpr + (1.0 - p.tpr) * (1.0 - p.tpr);
    let mut best = 0;
    for (i, p) in curve.points().iter().enumerate() {
        if region.contains(*p) && dist(*p) < dist(curve.points()[best]) {
            best = i;
        }
    }
    best
}

/// Expected deployment cost of a policy on labeled data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestCost {
    pub value: f64,
    /// Monte Carlo standard error, `None` for quadrature.
    pub std_error: Option<f64>,
    /// Seed and sample count of the Monte Carlo estimate.
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

/// Mean over `t` of the cost of alerting on `score >= policy(t)`.
pub fn expected_test_cost(
    policy: &ThresholdPolicy,
    test: &LabeledScores,
    spec: &CostSpec,
) -> Result<TestCost> {
    if policy.entries().is_empty() {
        return Err(Error::EmptyPolicy);
    }
    let points: Vec<RocPoint> = policy
        .entries()
        .iter()
        .map(|e| test.rates_at(e.threshold))
        .collect();
    let est = spec.try_integrate(|t| {
        let i = policy.entry_index(t).expect("non-empty policy");
        Ok(cost(points[i], CostModel::new(t)?))
    })?;
    let mc = spec.is_monte_carlo();
    Ok(TestCost {
        value: est.mean,
        std_error: est.std_error,
        seed: mc.then_some(spec.seed()),
        samples: mc.then_some(spec.samples()),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionReport {
    pub strategy: Strategy,
    pub winner: String,
    /// The winner's score under the strategy.
    pub metric: f64,
    /// Every candidate's score, in candidate order.
    pub scores: Vec<(String, f64)>,
    /// `None` when the winning curve has no thresholds.
    pub policy: Option<ThresholdPolicy>,
    /// Present when the winner has test scores and a policy.
    pub expected_test_cost: Option<TestCost>,
    /// No candidate has a feasible operating point besides never-alarm.
    pub no_feasible_candidate: bool,
}

fn strategy_score(
    strategy: Strategy,
    curve: &RocCurve,
    region: &FeasibleRegion,
    spec: &CostSpec,
) -> Result<f64> {
    Ok(match strategy {
        Strategy::MaxPV => partial_voros(curve, region, spec)?.value,
        Strategy::MaxVOROS => voros_unconstrained(curve, *region.profile(), spec)?.value,
        Strategy::MaxFeasibleRecall => feasible_recall(curve, region),
        Strategy::MaxFeasiblePAUROC => feasible_pauroc(curve, region),
    })
}

/// Index of the highest score; equal scores go to the smaller name.
fn argmax_by_name(names: &[&str], scores: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..scores.len() {
        if scores[i] > scores[best] || (scores[i] == scores[best] && names[i] < names[best]) {
            best = i;
        }
    }
    best
}

/// Picks the best candidate under `strategy` and the thresholds to deploy.
///
/// The cost-aware strategies deploy the winner's feasible threshold policy;
/// this applies to the unconstrained VOROS strategy too, so that every
/// strategy is compared on deployments that respect the limits.
pub fn select_model(
    candidates: &CandidateSet,
    strategy: Strategy,
    region: &FeasibleRegion,
    spec: &CostSpec,
) -> Result<SelectionReport> {
    spec.check_region(region)?;
    let cands = candidates.candidates();
    let names: Vec<&str> = cands.iter().map(|c| c.name.as_str()).collect();
    let values = cands
        .iter()
        .map(|c| strategy_score(strategy, &c.validation, region, spec))
        .collect::<Result<Vec<f64>>>()?;
    let w = argmax_by_name(&names, &values);
    let winner = &cands[w];

    let policy = match strategy {
        Strategy::MaxPV | Strategy::MaxVOROS => {
            match threshold_policy(&winner.validation, region, spec) {
                Ok(p) => Some(p),
                Err(Error::MissingThresholds) => None,
                Err(e) => return Err(e),
            }
        }
        Strategy::MaxFeasibleRecall | Strategy::MaxFeasiblePAUROC => {
            let i = if strategy == Strategy::MaxFeasibleRecall {
                recall_point(&winner.validation, region)
            } else {
                knee_point(&winner.validation, region)
            };
            winner
                .validation
                .threshold_of(i)
                .map(|tau| ThresholdPolicy::constant(winner.validation.points()[i], tau, spec))
        }
    };

    let expected = match (&policy, &winner.test) {
        (Some(p), Some(test)) => Some(expected_test_cost(p, test, spec)?),
        _ => None,
    };

    let no_feasible_candidate = cands.iter().all(|c| {
        c.validation
            .points()
            .iter()
            .all(|p| *p == RocPoint::ORIGIN || !region.contains(*p))
    });

    Ok(SelectionReport {
        strategy,
        winner: winner.name.clone(),
        metric: values[w],
        scores: names.iter().map(|n| String::from(*n)).zip(values).collect(),
        policy,
        expected_test_cost: expected,
        no_feasible_candidate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellOutcome {
    /// Index of the candidate with a clear win.
    Winner(usize),
    /// Top two within the tie threshold.
    Tie,
    /// The constraints are impractical or the cost range passes the
    /// never-alarm bound; nothing is computed.
    Invalid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapCell {
    pub alpha: f64,
    pub kappa_frac: f64,
    pub outcome: CellOutcome,
    /// Partial VOROS per candidate; empty for invalid cells.
    pub values: Vec<f64>,
}

/// Win map over a grid of precision limits (rows) and capacity fractions
/// (columns), stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapGrid {
    pub alphas: Vec<f64>,
    pub kappa_fracs: Vec<f64>,
    pub names: Vec<String>,
    pub epsilon: f64,
    pub cells: Vec<HeatmapCell>,
}

impl HeatmapGrid {
    pub fn cell(&self, alpha_index: usize, kappa_index: usize) -> &HeatmapCell {
        &self.cells[alpha_index * self.kappa_fracs.len() + kappa_index]
    }

    /// Display label for a cell: winner name, `tie` or `invalid`.
    pub fn label(&self, cell: &HeatmapCell) -> &str {
        match cell.outcome {
            CellOutcome::Winner(i) => &self.names[i],
            CellOutcome::Tie => "tie",
            CellOutcome::Invalid => "invalid",
        }
    }

    /// Distinct winners, in candidate order.
    pub fn winners(&self) -> Vec<&str> {
        (0..self.names.len())
            .filter(|&i| self.cells.iter().any(|c| c.outcome == CellOutcome::Winner(i)))
            .map(|i| self.names[i].as_str())
            .collect()
    }

    pub fn tie_count(&self) -> usize {
        self.cells.iter().filter(|c| c.outcome == CellOutcome::Tie).count()
    }
}

/// One heatmap cell. Pure, so cells can be computed in any order.
pub fn heatmap_cell(
    candidates: &CandidateSet,
    profile: DatasetProfile,
    alpha: f64,
    kappa_frac: f64,
    spec: &CostSpec,
    epsilon: f64,
) -> Result<HeatmapCell> {
    let invalid = HeatmapCell {
        alpha,
        kappa_frac,
        outcome: CellOutcome::Invalid,
        values: Vec::new(),
    };
    let constraints = match Constraints::with_kappa_fraction(alpha, kappa_frac, &profile) {
        Ok(c) => c,
        Err(_) => return Ok(invalid),
    };
    if constraints.check_practical(&profile).is_err() {
        return Ok(invalid);
    }
    let region = match FeasibleRegion::new(profile, constraints) {
        Ok(r) if r.case().is_main_case() => r,
        _ => return Ok(invalid),
    };
    if spec.check_region(&region).is_err() {
        return Ok(invalid);
    }
    let values = candidates
        .candidates()
        .iter()
        .map(|c| Ok(partial_voros(&c.validation, &region, spec)?.value))
        .collect::<Result<Vec<f64>>>()?;
    let names: Vec<&str> = candidates.names().collect();
    let best = argmax_by_name(&names, &values);
    let runner_up = values
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != best)
        .map(|(_, &v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let outcome = if values[best] - runner_up <= epsilon {
        CellOutcome::Tie
    } else {
        CellOutcome::Winner(best)
    };
    Ok(HeatmapCell {
        alpha,
        kappa_frac,
        outcome,
        values,
    })
}

/// Partial VOROS winner at every `(alpha, kappa_frac)` grid cell; `kappa`
/// is the fraction times the dataset size.
pub fn win_heatmap(
    candidates: &CandidateSet,
    profile: DatasetProfile,
    alphas: &[f64],
    kappa_fracs: &[f64],
    spec: &CostSpec,
    epsilon: f64,
) -> Result<HeatmapGrid> {
    if candidates.len() < 2 {
        return Err(Error::TooFewCandidates);
    }
    let mut cells = Vec::with_capacity(alphas.len() * kappa_fracs.len());
    for &alpha in alphas {
        for &frac in kappa_fracs {
            cells.push(heatmap_cell(candidates, profile, alpha, frac, spec, epsilon)?);
        }
    }
    Ok(HeatmapGrid {
        alphas: alphas.to_vec(),
        kappa_fracs: kappa_fracs.to_vec(),
        names: candidates.names().map(String::from).collect(),
        epsilon,
        cells,
    })
}
