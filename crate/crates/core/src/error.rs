use alloc::string::String;

use crate::region::RegionCase;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("no examples supplied")]
    EmptyInput,
    #[error("{scores} scores but {labels} labels")]
    LengthMismatch { scores: usize, labels: usize },
    #[error("labels contain no {0} examples")]
    MissingClass(&'static str),
    #[error("score at index {0} is not a finite number")]
    NonFiniteScore(usize),
    #[error("class counts must both be at least 1 (got {n_pos} positives, {n_neg} negatives)")]
    InvalidCounts { n_pos: u64, n_neg: u64 },
    #[error("ROC point ({fpr}, {tpr}) lies outside the unit square")]
    PointOutOfRange { fpr: f64, tpr: f64 },
    #[error("threshold list has {thresholds} entries for {points} points")]
    ThresholdCount { points: usize, thresholds: usize },
    #[error("cost parameter t = {0} is outside [0, 1]")]
    InvalidCostParameter(f64),
    #[error("cost ratio C0/C1 must be finite and positive, got {0}")]
    NonPositiveRatio(f64),
    #[error("minimum precision must lie in [0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("maximum capacity must be a nonnegative number, got {0}")]
    InvalidKappa(f64),
    #[error("feasible region is degenerate ({0:?}) and has zero area")]
    DegenerateRegion(RegionCase),
    #[error("operation is not defined for region case {0:?}")]
    UnsupportedCase(RegionCase),
    #[error("point ({fpr}, {tpr}) is not feasible under the given constraints")]
    InfeasiblePoint { fpr: f64, tpr: f64 },
    #[error(
        "cost parameter t = {t} exceeds the never-alarm bound {bound}; \
         the never-alarm classifier would no longer have maximal cost"
    )]
    NeverAlarmBound { t: f64, bound: f64 },
    #[error("invalid cost specification: {0}")]
    InvalidCostSpec(&'static str),
    #[error("curve carries no threshold provenance; evaluate it from raw ROC points only")]
    MissingThresholds,
    #[error("threshold policy has no entries")]
    EmptyPolicy,
    #[error("no candidates supplied")]
    NoCandidates,
    #[error("duplicate candidate name {0:?}")]
    DuplicateName(String),
    #[error("heatmap needs at least two candidates")]
    TooFewCandidates,
}
