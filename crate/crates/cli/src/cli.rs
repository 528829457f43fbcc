//! Command-line definitions and dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pvoros_core::region::half_plane_polygon;
use pvoros_core::geometry::polygon_area;
use pvoros_core::{classify_region, Constraints, DatasetProfile, FeasibleRegion};
use serde::Serialize;

use crate::config::{parse_grid, GridConfig, RawConfig, RunConfig};
use crate::error::{CliError, Result};
use crate::format::to_json;
use crate::output::{thread_pool, write_atomic};
use crate::report::{compute_heatmap, load_candidates, run_report, selections, write_heatmap};
use crate::svg::region_svg;
use crate::synth::{scores_csv, TwoGaussian};

#[derive(Debug, Parser)]
#[command(name = "pvoros", version, about = "Evaluate and select classifiers under cost, precision and capacity limits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full evaluation: report.json, region.svg, area_vs_t.csv and heatmap files.
    Report(Evaluate),
    /// Print the selection made by each strategy as JSON.
    Select(Evaluate),
    /// Sweep precision and capacity limits and record which candidate wins.
    Heatmap(HeatmapArgs),
    /// Write a scores file drawn from two Gaussians.
    Synth(SynthArgs),
    /// Print the feasible region for a profile and constraints.
    Region(RegionArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Settings {
    /// TOML file with any of the settings below; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n_pos: Option<u64>,
    #[arg(long)]
    pub n_neg: Option<u64>,
    /// Minimum precision.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Maximum number of predicted positives.
    #[arg(long, conflicts_with = "kappa_frac")]
    pub kappa: Option<f64>,
    /// Maximum predicted positives as a fraction of the dataset.
    #[arg(long)]
    pub kappa_frac: Option<f64>,
    /// Uniform cost parameter range, `a,b`.
    #[arg(long, value_parser = parse_pair, conflicts_with = "ratio_range")]
    pub t_range: Option<[f64; 2]>,
    /// Uniform C0/C1 cost ratio range, `low,high` (Monte Carlo).
    #[arg(long, value_parser = parse_pair)]
    pub ratio_range: Option<[f64; 2]>,
    /// Trapezoid nodes for a uniform t range.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Monte Carlo samples for a cost ratio range.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Restrict to these strategies (repeatable).
    #[arg(long = "strategy")]
    pub strategies: Vec<String>,
    /// Heatmap precision axis, `start:stop:count`.
    #[arg(long)]
    pub alpha_grid: Option<String>,
    /// Heatmap capacity axis as dataset fractions, `start:stop:count`.
    #[arg(long)]
    pub kappa_grid: Option<String>,
    /// Heatmap tie threshold.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

fn parse_pair(text: &str) -> std::result::Result<[f64; 2], String> {
    let bad = || format!("expected two comma-separated numbers, got {text:?}");
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok([a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?])
}

impl Settings {
    fn raw(&self, out: Option<PathBuf>) -> Result<RawConfig> {
        let file = match &self.config {
            Some(p) => RawConfig::from_toml_file(p)?,
            None => RawConfig::default(),
        };
        let flags = RawConfig {
            n_pos: self.n_pos,
            n_neg: self.n_neg,
            alpha: self.alpha,
            kappa: self.kappa,
            kappa_frac: self.kappa_frac,
            t_range: self.t_range,
            ratio_range: self.ratio_range,
            resolution: self.resolution,
            samples: self.samples,
            seed: self.seed,
            strategies: (!self.strategies.is_empty()).then(|| self.strategies.clone()),
            heatmap_alphas: self.alpha_grid.as_deref().map(parse_grid).transpose()?,
            heatmap_kappa_fracs: self.kappa_grid.as_deref().map(parse_grid).transpose()?,
            epsilon: self.epsilon,
            out,
        };
        Ok(file.merge(flags))
    }
}

#[derive(Debug, Args)]
pub struct Evaluate {
    /// Validation files, one per candidate (scores or ROC points layout).
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Test scores file paired with the validation file of the same name.
    #[arg(long = "test")]
    pub tests: Vec<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub settings: Settings,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub settings: Settings,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 1.0)]
    pub mu_pos: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma_pos: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu_neg: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma_neg: f64,
    #[arg(long)]
    pub n_pos: usize,
    #[arg(long)]
    pub n_neg: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Destination file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long)]
    pub n_pos: u64,
    #[arg(long)]
    pub n_neg: u64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, conflicts_with = "kappa_frac", required_unless_present = "kappa_frac")]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub kappa_frac: Option<f64>,
    /// Also draw the region to this SVG file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Serialize)]
struct RegionPrint {
    case: &'static str,
    vertices: Vec<[f64; 2]>,
    area: f64,
    never_alarm_bound: Option<f64>,
    practical: bool,
    violation: Option<String>,
}

fn print(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io("<stdout>", e))
}

fn out_dir(out: Option<PathBuf>) -> Result<PathBuf> {
    out.ok_or_else(|| CliError::Config("an output directory is required (--out or `out` in the config)".into()))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Report(args) => {
            let loaded = load_candidates(&args.inputs, &args.tests)?;
            let cfg = RunConfig::resolve(&args.settings.raw(args.out)?, loaded.inferred_profile)?;
            let dir = out_dir(cfg.out.clone())?;
            let pool = thread_pool()?;
            for p in run_report(&cfg, &loaded, &dir, &pool)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        }
        Command::Select(args) => {
            let loaded = load_candidates(&args.inputs, &args.tests)?;
            let cfg = RunConfig::resolve(&args.settings.raw(args.out)?, loaded.inferred_profile)?;
            let pool = thread_pool()?;
            print(&to_json(&selections(&cfg, &loaded.set, &pool)?))
        }
        Command::Heatmap(args) => {
            let loaded = load_candidates(&args.inputs, &[])?;
            let raw = args.settings.raw(args.out)?;
            let cfg = GridConfig::resolve(&raw, loaded.inferred_profile)?;
            let dir = out_dir(raw.out)?;
            let pool = thread_pool()?;
            let grid = compute_heatmap(cfg.profile, &cfg.spec, &loaded.set, &cfg.grid, &pool)?;
            for p in write_heatmap(&dir, &grid)? {
                eprintln!("wrote {}", p.display());
            }
            Ok(())
        }
        Command::Synth(args) => {
            let model = TwoGaussian::new(args.mu_pos, args.sigma_pos, args.mu_neg, args.sigma_neg)?;
            let (scores, labels) = model.sample(args.n_pos, args.n_neg, args.seed)?;
            let text = scores_csv(&scores, &labels);
            match args.out {
                Some(p) => write_atomic(&p, text.as_bytes()),
                None => print(&text),
            }
        }
        Command::Region(args) => region(args),
    }
}

fn region(args: RegionArgs) -> Result<()> {
    let profile = DatasetProfile::new(args.n_pos, args.n_neg)?;
    let constraints = match (args.kappa, args.kappa_frac) {
        (Some(k), _) => Constraints::new(args.alpha, k)?,
        (None, Some(f)) => Constraints::with_kappa_fraction(args.alpha, f, &profile)?,
        (None, None) => unreachable!("clap requires one of them"),
    };
    let violation = constraints.check_practical(&profile).err().map(|v| v.to_string());
    let printed = match FeasibleRegion::new(profile, constraints) {
        Ok(region) => {
            if let Some(path) = &args.svg {
                write_atomic(path, region_svg(&region, &[]).as_bytes())?;
            }
            RegionPrint {
                case: region.case().name(),
                vertices: region.vertices().iter().map(|p| [p.fpr, p.tpr]).collect(),
                area: region.area(),
                never_alarm_bound: region.never_alarm_bound(),
                practical: violation.is_none(),
                violation,
            }
        }
        Err(_) => {
            // zero-area regions still have a case and a (degenerate) outline
            let outline = half_plane_polygon(&profile, &constraints);
            RegionPrint {
                case: classify_region(&profile, &constraints).name(),
                area: polygon_area(&outline),
                vertices: outline.iter().map(|p| [p.fpr, p.tpr]).collect(),
                never_alarm_bound: constraints.never_alarm_bound(&profile),
                practical: violation.is_none(),
                violation,
            }
        }
    };
    print(&to_json(&printed))
}
