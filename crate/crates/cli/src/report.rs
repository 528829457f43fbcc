//! Evaluating a candidate set and writing `report.json` with its companion
//! plot files.

use std::path::{Path, PathBuf};

use pvoros_core::selection::heatmap_cell;
use pvoros_core::{
    best_normalized_area, feasible_hull, feasible_pauroc, feasible_recall, iso_line, optimal_t_ranges,
    partial_voros, select_model, voros_unconstrained, Candidate, CandidateSet, CostKind, CostModel, CostSpec,
    DatasetProfile, FeasibleRegion, HeatmapGrid, SelectionReport, ThresholdPolicy,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{GridSpec, RunConfig};
use crate::error::{CliError, Result};
use crate::format::{fmt_f64, to_json, Threshold};
use crate::ingest::{ingest, Format, Ingested};
use crate::output::write_atomic;
use crate::svg::{heatmap_svg, region_svg};

pub const SCHEMA: &str = "pvoros/1";

/// Validation candidates with test scores paired by name.
pub struct Loaded {
    pub set: CandidateSet,
    pub formats: Vec<Format>,
    /// Class counts of the first scores-format validation file.
    pub inferred_profile: Option<DatasetProfile>,
}

pub fn load_candidates(validation: &[PathBuf], test: &[PathBuf]) -> Result<Loaded> {
    let ingested: Vec<Ingested> = validation.iter().map(|p| ingest(p)).collect::<Result<_>>()?;
    let mut tests: Vec<Ingested> = test.iter().map(|p| ingest(p)).collect::<Result<_>>()?;
    let inferred_profile = ingested
        .iter()
        .find_map(|i| i.scores.as_ref().map(|s| s.profile()));
    let mut formats = Vec::with_capacity(ingested.len());
    let mut candidates = Vec::with_capacity(ingested.len());
    for ing in ingested {
        formats.push(ing.format);
        let mut cand = Candidate::new(ing.name.clone(), ing.curve);
        if let Some(pos) = tests.iter().position(|t| t.name == ing.name) {
            let t = tests.remove(pos);
            let scores = t.scores.ok_or_else(|| {
                CliError::Config(format!("test file for {:?} must use the scores layout", ing.name))
            })?;
            cand = cand.with_test(scores);
        }
        candidates.push(cand);
    }
    if let Some(t) = tests.first() {
        return Err(CliError::Config(format!(
            "test file {:?} has no validation file with the same name",
            t.name
        )));
    }
    Ok(Loaded {
        set: CandidateSet::new(candidates)?,
        formats,
        inferred_profile,
    })
}

#[derive(Debug, Serialize)]
pub struct ProfileOut {
    pub n_pos: u64,
    pub n_neg: u64,
    pub prevalence: f64,
}

#[derive(Debug, Serialize)]
pub struct ConstraintsOut {
    pub alpha: f64,
    pub kappa: f64,
    pub kappa_frac: f64,
}

#[derive(Debug, Serialize)]
pub struct CostOut {
    pub kind: &'static str,
    pub t_low: f64,
    pub t_high: f64,
    pub ratio_low: Option<f64>,
    pub ratio_high: Option<f64>,
    pub resolution: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct RegionOut {
    pub case: &'static str,
    pub vertices: Vec<[f64; 2]>,
    pub area: f64,
    pub never_alarm_bound: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct CandidateOut {
    pub name: String,
    pub format: &'static str,
    pub n_points: usize,
    pub pv: f64,
    pub pv_std_error: Option<f64>,
    pub voros: f64,
    pub voros_std_error: Option<f64>,
    pub feasible_recall: f64,
    pub feasible_pauroc: f64,
    pub no_feasible_operating_point: bool,
}

#[derive(Debug, Serialize)]
pub struct PolicyOut {
    pub t_low: f64,
    pub t_high: f64,
    pub fpr: f64,
    pub tpr: f64,
    pub threshold: Threshold,
}

#[derive(Debug, Serialize)]
pub struct TestCostOut {
    pub value: f64,
    pub std_error: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct SelectionOut {
    pub strategy: &'static str,
    pub winner: String,
    pub metric: f64,
    pub policy: Option<Vec<PolicyOut>>,
    pub expected_test_cost: Option<TestCostOut>,
    pub no_feasible_candidate: bool,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub profile: ProfileOut,
    pub constraints: ConstraintsOut,
    pub cost: CostOut,
    pub region: RegionOut,
    pub candidates: Vec<CandidateOut>,
    pub selections: Vec<SelectionOut>,
}

fn cost_out(cfg: &RunConfig) -> CostOut {
    let spec = &cfg.spec;
    let (t_low, t_high) = spec.t_support();
    match *spec.kind() {
        CostKind::UniformT { .. } => CostOut {
            kind: "uniform_t",
            t_low,
            t_high,
            ratio_low: None,
            ratio_high: None,
            resolution: Some(spec.resolution()),
            samples: None,
            seed: None,
        },
        CostKind::CostRatio { low, high, .. } => CostOut {
            kind: "cost_ratio",
            t_low,
            t_high,
            ratio_low: Some(low),
            ratio_high: Some(high),
            resolution: None,
            samples: Some(spec.samples()),
            seed: Some(spec.seed()),
        },
    }
}

pub fn region_out(region: &FeasibleRegion) -> RegionOut {
    RegionOut {
        case: region.case().name(),
        vertices: region.vertices().iter().map(|p| [p.fpr, p.tpr]).collect(),
        area: region.area(),
        never_alarm_bound: region.never_alarm_bound(),
    }
}

fn policy_out(policy: &ThresholdPolicy) -> Vec<PolicyOut> {
    policy
        .entries()
        .iter()
        .map(|e| PolicyOut {
            t_low: e.t_low,
            t_high: e.t_high,
            fpr: e.point.fpr,
            tpr: e.point.tpr,
            threshold: Threshold(e.threshold),
        })
        .collect()
}

pub fn selection_out(rep: &SelectionReport) -> SelectionOut {
    SelectionOut {
        strategy: rep.strategy.name(),
        winner: rep.winner.clone(),
        metric: rep.metric,
        policy: rep.policy.as_ref().map(policy_out),
        expected_test_cost: rep.expected_test_cost.map(|c| TestCostOut {
            value: c.value,
            std_error: c.std_error,
            seed: c.seed,
            samples: c.samples,
        }),
        no_feasible_candidate: rep.no_feasible_candidate,
    }
}

/// Selection under every configured strategy.
pub fn selections(cfg: &RunConfig, set: &CandidateSet, pool: &rayon::ThreadPool) -> Result<Vec<SelectionOut>> {
    let region = cfg.region()?;
    let reports: Vec<SelectionReport> = pool.install(|| {
        cfg.strategies
            .par_iter()
            .map(|&s| select_model(set, s, &region, &cfg.spec))
            .collect::<pvoros_core::Result<_>>()
    })?;
    Ok(reports.iter().map(selection_out).collect())
}

pub fn build_report(cfg: &RunConfig, loaded: &Loaded, pool: &rayon::ThreadPool) -> Result<Report> {
    let region = cfg.region()?;
    let spec = &cfg.spec;
    let candidates: Vec<CandidateOut> = pool.install(|| {
        loaded
            .set
            .candidates()
            .par_iter()
            .zip(loaded.formats.par_iter())
            .map(|(c, fmt)| {
                let pv = partial_voros(&c.validation, &region, spec)?;
                let vo = voros_unconstrained(&c.validation, cfg.profile, spec)?;
                Ok(CandidateOut {
                    name: c.name.clone(),
                    format: match fmt {
                        Format::Scores => "scores",
                        Format::RocPoints => "rocpoints",
                    },
                    n_points: c.validation.points().len(),
                    pv: pv.value,
                    pv_std_error: pv.std_error,
                    voros: vo.value,
                    voros_std_error: vo.std_error,
                    feasible_recall: feasible_recall(&c.validation, &region),
                    feasible_pauroc: feasible_pauroc(&c.validation, &region),
                    no_feasible_operating_point: pv.no_feasible_operating_point,
                })
            })
            .collect::<pvoros_core::Result<_>>()
    })?;
    Ok(Report {
        schema: SCHEMA,
        profile: ProfileOut {
            n_pos: cfg.profile.n_pos(),
            n_neg: cfg.profile.n_neg(),
            prevalence: cfg.profile.prevalence(),
        },
        constraints: ConstraintsOut {
            alpha: cfg.constraints.alpha(),
            kappa: cfg.constraints.kappa(),
            kappa_frac: cfg.kappa_frac(),
        },
        cost: cost_out(cfg),
        region: region_out(&region),
        candidates,
        selections: selections(cfg, &loaded.set, pool)?,
    })
}

/// Normalized best lesser area per candidate on an even grid of `t`
/// across the support of the cost distribution.
pub fn area_vs_t_csv(cfg: &RunConfig, set: &CandidateSet, points: usize) -> Result<String> {
    let region = cfg.region()?;
    let (lo, hi) = cfg.spec.t_support();
    let ranges: Vec<_> = set
        .candidates()
        .iter()
        .map(|c| optimal_t_ranges(&feasible_hull(&c.validation, &region), &region))
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    header.extend(set.names().map(str::to_owned));
    w.write_record(&header).expect("in-memory csv");
    for i in 0..points {
        let t = if i + 1 == points { hi } else { lo + (hi - lo) * i as f64 / (points - 1) as f64 };
        let mut row = vec![fmt_f64(t)];
        for r in &ranges {
            row.push(fmt_f64(best_normalized_area(r, &region, t)?));
        }
        w.write_record(&row).expect("in-memory csv");
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8"))
}

pub fn compute_heatmap(
    profile: DatasetProfile,
    spec: &CostSpec,
    set: &CandidateSet,
    grid: &GridSpec,
    pool: &rayon::ThreadPool,
) -> Result<HeatmapGrid> {
    if set.len() < 2 {
        return Err(pvoros_core::Error::TooFewCandidates.into());
    }
    let cols = grid.kappa_fracs.len();
    let cells = pool.install(|| {
        (0..grid.alphas.len() * cols)
            .into_par_iter()
            .map(|i| {
                heatmap_cell(
                    set,
                    profile,
                    grid.alphas[i / cols],
                    grid.kappa_fracs[i % cols],
                    spec,
                    grid.epsilon,
                )
            })
            .collect::<pvoros_core::Result<Vec<_>>>()
    })?;
    Ok(HeatmapGrid {
        alphas: grid.alphas.clone(),
        kappa_fracs: grid.kappa_fracs.clone(),
        names: set.names().map(str::to_owned).collect(),
        epsilon: grid.epsilon,
        cells,
    })
}

pub fn heatmap_csv(grid: &HeatmapGrid) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["alpha".to_string(), "kappa_frac".into(), "outcome".into()];
    header.extend(grid.names.iter().cloned());
    w.write_record(&header).expect("in-memory csv");
    for cell in &grid.cells {
        let mut row = vec![fmt_f64(cell.alpha), fmt_f64(cell.kappa_frac), grid.label(cell).to_owned()];
        if cell.values.is_empty() {
            row.extend(grid.names.iter().map(|_| String::new()));
        } else {
            row.extend(cell.values.iter().map(|v| fmt_f64(*v)));
        }
        w.write_record(&row).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

/// Iso-lines drawn on the region figure: each candidate's optimal point at
/// the middle of the cost range.
fn sample_isolines(cfg: &RunConfig, set: &CandidateSet) -> Result<Vec<(String, pvoros_core::IsoLine)>> {
    let region = cfg.region()?;
    let (lo, hi) = cfg.spec.t_support();
    let t = (lo + hi) / 2.0;
    let tm = CostModel::new(t)?;
    Ok(set
        .candidates()
        .iter()
        .map(|c| {
            let ranges = optimal_t_ranges(&feasible_hull(&c.validation, &region), &region);
            let best = ranges
                .iter()
                .find(|r| r.t_low <= t && t <= r.t_high)
                .map(|r| r.point)
                .unwrap_or(pvoros_core::RocPoint::ORIGIN);
            (format!("{} (t = {t:.3})", c.name), iso_line(best, tm))
        })
        .collect())
}

pub fn write_heatmap(dir: &Path, grid: &HeatmapGrid) -> Result<Vec<PathBuf>> {
    let csv_path = dir.join("heatmap.csv");
    let svg_path = dir.join("heatmap.svg");
    write_atomic(&csv_path, heatmap_csv(grid).as_bytes())?;
    write_atomic(&svg_path, heatmap_svg(grid).as_bytes())?;
    Ok(vec![csv_path, svg_path])
}

/// Writes `report.json`, `region.svg`, `area_vs_t.csv` and, with two or
/// more candidates, the heatmap files. Returns the written paths.
pub fn run_report(cfg: &RunConfig, loaded: &Loaded, dir: &Path, pool: &rayon::ThreadPool) -> Result<Vec<PathBuf>> {
    let report = build_report(cfg, loaded, pool)?;
    let mut written = Vec::new();
    let json = dir.join("report.json");
    write_atomic(&json, to_json(&report).as_bytes())?;
    written.push(json);
    let svg = dir.join("region.svg");
    write_atomic(&svg, region_svg(&cfg.region()?, &sample_isolines(cfg, &loaded.set)?).as_bytes())?;
    written.push(svg);
    let area = dir.join("area_vs_t.csv");
    write_atomic(&area, area_vs_t_csv(cfg, &loaded.set, 201)?.as_bytes())?;
    written.push(area);
    if loaded.set.len() >= 2 {
        let grid = compute_heatmap(cfg.profile, &cfg.spec, &loaded.set, &cfg.grid, pool)?;
        written.extend(write_heatmap(dir, &grid)?);
    }
    Ok(written)
}
