//! Run configuration: a TOML file, command-line flags, or both (flags win).

use std::fs;
use std::path::{Path, PathBuf};

use pvoros_core::{Constraints, CostSpec, DatasetProfile, Error as CoreError, FeasibleRegion, Strategy};
use serde::Deserialize;

use crate::error::{CliError, Result};

/// Unresolved settings. Every field is optional so that a file and the
/// command line can each supply part of the configuration.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub n_pos: Option<u64>,
    pub n_neg: Option<u64>,
    pub alpha: Option<f64>,
    pub kappa: Option<f64>,
    pub kappa_frac: Option<f64>,
    /// Uniform `t` on `[a, b]`.
    pub t_range: Option<[f64; 2]>,
    /// Uniform `C0/C1` on `[low, high]`.
    pub ratio_range: Option<[f64; 2]>,
    pub resolution: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub strategies: Option<Vec<String>>,
    pub heatmap_alphas: Option<Vec<f64>>,
    pub heatmap_kappa_fracs: Option<Vec<f64>>,
    pub epsilon: Option<f64>,
    pub out: Option<PathBuf>,
}

impl RawConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merge(self, over: RawConfig) -> RawConfig {
        RawConfig {
            n_pos: over.n_pos.or(self.n_pos),
            n_neg: over.n_neg.or(self.n_neg),
            alpha: over.alpha.or(self.alpha),
            // capacity is one setting written two ways
            kappa: if over.kappa_frac.is_some() { over.kappa } else { over.kappa.or(self.kappa) },
            kappa_frac: if over.kappa.is_some() {
                over.kappa_frac
            } else {
                over.kappa_frac.or(self.kappa_frac)
            },
            t_range: if over.ratio_range.is_some() { over.t_range } else { over.t_range.or(self.t_range) },
            ratio_range: if over.t_range.is_some() {
                over.ratio_range
            } else {
                over.ratio_range.or(self.ratio_range)
            },
            resolution: over.resolution.or(self.resolution),
            samples: over.samples.or(self.samples),
            seed: over.seed.or(self.seed),
            strategies: over.strategies.or(self.strategies),
            heatmap_alphas: over.heatmap_alphas.or(self.heatmap_alphas),
            heatmap_kappa_fracs: over.heatmap_kappa_fracs.or(self.heatmap_kappa_fracs),
            epsilon: over.epsilon.or(self.epsilon),
            out: over.out.or(self.out),
        }
    }
}

/// Axes and tie threshold of a win heatmap.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub alphas: Vec<f64>,
    pub kappa_fracs: Vec<f64>,
    pub epsilon: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            alphas: (0..11).map(|i| 0.1 + 0.05 * i as f64).collect(),
            kappa_fracs: vec![0.005, 0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7],
            epsilon: 0.01,
        }
    }
}

/// Parses `start:stop:count` into `count` evenly spaced values.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || CliError::Config(format!("grid {text:?} is not of the form start:stop:count"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    match count {
        0 => Err(bad()),
        1 => Ok(vec![start]),
        _ => Ok((0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect()),
    }
}

fn resolve_profile(raw: &RawConfig, inferred: Option<DatasetProfile>) -> Result<DatasetProfile> {
    match (raw.n_pos, raw.n_neg) {
        (Some(p), Some(n)) => Ok(DatasetProfile::new(p, n)?),
        (None, None) => inferred.ok_or_else(|| {
            CliError::Config(
                "class counts unknown: set n_pos and n_neg, or supply at least one scores file".into(),
            )
        }),
        _ => Err(CliError::Config("n_pos and n_neg must be given together".into())),
    }
}

fn resolve_spec(raw: &RawConfig, profile: DatasetProfile) -> Result<CostSpec> {
    let mut spec = match (raw.t_range, raw.ratio_range) {
        (Some([a, b]), None) => CostSpec::uniform_t(a, b)?,
        (None, Some([lo, hi])) => CostSpec::cost_ratio(lo, hi, profile)?,
        (Some(_), Some(_)) => {
            return Err(CliError::Config("give either `t_range` or `ratio_range`, not both".into()))
        }
        (None, None) => {
            return Err(CliError::Config(
                "cost distribution is required: set `t_range` or `ratio_range`".into(),
            ))
        }
    };
    if let Some(n) = raw.resolution {
        spec = spec.with_resolution(n)?;
    }
    if let Some(n) = raw.samples {
        spec = spec.with_samples(n)?;
    }
    if let Some(s) = raw.seed {
        spec = spec.with_seed(s);
    }
    Ok(spec)
}

fn resolve_grid(raw: &RawConfig) -> Result<GridSpec> {
    let mut grid = GridSpec::default();
    if let Some(a) = &raw.heatmap_alphas {
        grid.alphas = a.clone();
    }
    if let Some(k) = &raw.heatmap_kappa_fracs {
        grid.kappa_fracs = k.clone();
    }
    if grid.alphas.is_empty() || grid.kappa_fracs.is_empty() {
        return Err(CliError::Config("heatmap axes must not be empty".into()));
    }
    if let Some(e) = raw.epsilon {
        if e.is_nan() || e < 0.0 {
            return Err(CliError::Config(format!("tie threshold must be nonnegative, got {e}")));
        }
        grid.epsilon = e;
    }
    Ok(grid)
}

/// Settings for a heatmap sweep, where the grid replaces fixed constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub profile: DatasetProfile,
    pub spec: CostSpec,
    pub grid: GridSpec,
}

impl GridConfig {
    pub fn resolve(raw: &RawConfig, inferred: Option<DatasetProfile>) -> Result<Self> {
        let profile = resolve_profile(raw, inferred)?;
        Ok(Self {
            profile,
            spec: resolve_spec(raw, profile)?,
            grid: resolve_grid(raw)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub profile: DatasetProfile,
    pub constraints: Constraints,
    pub spec: CostSpec,
    pub strategies: Vec<Strategy>,
    pub grid: GridSpec,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Resolves `raw`, taking class counts from `inferred` when the
    /// configuration gives none, and checks the practical assumptions.
    pub fn resolve(raw: &RawConfig, inferred: Option<DatasetProfile>) -> Result<Self> {
        let profile = resolve_profile(raw, inferred)?;
        let alpha = raw
            .alpha
            .ok_or_else(|| CliError::Config("minimum precision `alpha` is required".into()))?;
        let constraints = match (raw.kappa, raw.kappa_frac) {
            (Some(k), None) => Constraints::new(alpha, k)?,
            (None, Some(f)) => Constraints::with_kappa_fraction(alpha, f, &profile)?,
            (Some(_), Some(_)) => {
                return Err(CliError::Config("give either `kappa` or `kappa_frac`, not both".into()))
            }
            (None, None) => {
                return Err(CliError::Config(
                    "capacity is required: set `kappa` (count) or `kappa_frac` (fraction of |D|)".into(),
                ))
            }
        };
        let spec = resolve_spec(raw, profile)?;
        let strategies = match &raw.strategies {
            None => Strategy::ALL.to_vec(),
            Some(names) => names
                .iter()
                .map(|n| {
                    Strategy::from_name(n).ok_or_else(|| {
                        CliError::Config(format!(
                            "unknown strategy {n:?}; expected one of {}",
                            Strategy::ALL.map(|s| s.name()).join(", ")
                        ))
                    })
                })
                .collect::<Result<_>>()?,
        };
        let grid = resolve_grid(raw)?;
        let cfg = RunConfig {
            profile,
            constraints,
            spec,
            strategies,
            grid,
            out: raw.out.clone(),
        };
        cfg.check_assumptions()?;
        Ok(cfg)
    }

    /// Rejects constraints outside the practical regime and cost ranges
    /// that reach past the never-alarm bound.
    pub fn check_assumptions(&self) -> Result<()> {
        self.constraints
            .check_practical(&self.profile)
            .map_err(|v| CliError::Assumption(v.to_string()))?;
        self.spec.check_region(&self.region()?).map_err(|e| match e {
            CoreError::NeverAlarmBound { t, bound } => CliError::Assumption(format!(
                "cost parameter must stay at or below alpha*N / (alpha*N + (1-alpha)*P) = {bound} \
                 for alpha = {}, but the cost range reaches t = {t}; lower the upper end of the range",
                self.constraints.alpha()
            )),
            other => other.into(),
        })
    }

    pub fn region(&self) -> Result<FeasibleRegion> {
        Ok(FeasibleRegion::new(self.profile, self.constraints)?)
    }

    pub fn kappa_frac(&self) -> f64 {
        self.constraints.kappa() / self.profile.total() as f64
    }
}
