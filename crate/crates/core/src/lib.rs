//! Cost- and constraint-aware evaluation of binary classifiers in ROC space.
//!
//! A classifier that must respect a minimum precision `alpha` and a maximum
//! number of alerts `kappa` can only operate inside a convex polygon of ROC
//! space, the *feasible region*. This crate builds that polygon, measures
//! how much of it a given operating point beats at a fractional cost
//! parameter `t` (the *partial area of lesser classifiers*), and averages the
//! best such area over a distribution of `t` to obtain the *partial VOROS*.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, plotting and
//! the command-line tool live in the `pvoros` crate.
//!
//! Module map:
//!
//! - [`roc`]: profiles, ROC curves from scores, upper hulls, costs, iso-performance lines.
//! - [`region`]: precision/capacity lines, region classification and polygons.
//! - [`partial_area`]: lesser-classifier polygons and the clipping oracle.
//! - [`voros`]: cost specifications, optimal `t` ranges, partial VOROS, threshold policies.
//! - [`selection`]: model selection strategies, expected deployment cost, win heatmaps.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;
pub mod geometry;
pub mod partial_area;
pub mod region;
pub mod roc;
pub mod selection;
pub mod voros;

pub use error::{Error, Result};
pub use partial_area::{
    clip_area_oracle, lesser_area, lesser_vertices, rational_linear_coeffs, LesserCase,
    PartialAreaResult, RationalLinearForm, VertexForm,
};
pub use region::{
    capacity_line, classify_region, is_feasible, precision_line, region_area_closed_form,
    region_polygon, Constraints, FeasibleRegion, RegionCase,
};
pub use roc::{
    build_roc_curve, cost, iso_line, t_from_cost_ratio, upper_hull, CostModel, DatasetProfile,
    HullCurve, HullVertex, IsoLine, RocCurve, RocPoint,
};
pub use selection::{
    expected_test_cost, feasible_pauroc, feasible_recall, heatmap_cell, select_model, win_heatmap, Candidate,
    CandidateSet, CellOutcome, HeatmapCell, HeatmapGrid, LabeledScores, SelectionReport, Strategy,
    TestCost,
};
pub use voros::{
    best_normalized_area, feasible_hull, optimal_t_ranges, partial_voros, threshold_policy, voros_unconstrained,
    CostKind, CostSpec, OptimalRange, PolicyEntry, ThresholdPolicy, VorosValue,
};
