//! Run configuration: built-in defaults, then a JSON file, then flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use focpc_core::{FractionalOrder, SweepOptions};

use crate::problems;

pub const DEFAULT_PROBLEM: &str = "resource";
pub const DEFAULT_ALPHA: f64 = 1.0;
pub const DEFAULT_HORIZON: f64 = 2.0;
pub const DEFAULT_X0: f64 = 1.0;
pub const DEFAULT_N_STEPS: usize = 1000;
pub const DEFAULT_MAX_ITERS: usize = 500;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_RELAXATION: f64 = 0.5;
pub const DEFAULT_OUTPUT: &str = "solution.csv";

/// Every field optional; the shape shared by `--config` files and flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub problem: Option<String>,
    pub alpha: Option<f64>,
    pub alphas: Option<Vec<f64>>,
    #[serde(rename = "T", alias = "horizon")]
    pub horizon: Option<f64>,
    pub x0: Option<f64>,
    #[serde(alias = "n")]
    pub n_steps: Option<usize>,
    pub max_iters: Option<usize>,
    pub tol: Option<f64>,
    pub relaxation: Option<f64>,
    pub output: Option<PathBuf>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Fields set in `self` win over `base`.
    pub fn over(self, base: PartialConfig) -> PartialConfig {
        PartialConfig {
            problem: self.problem.or(base.problem),
            alpha: self.alpha.or(base.alpha),
            alphas: self.alphas.or(base.alphas),
            horizon: self.horizon.or(base.horizon),
            x0: self.x0.or(base.x0),
            n_steps: self.n_steps.or(base.n_steps),
            max_iters: self.max_iters.or(base.max_iters),
            tol: self.tol.or(base.tol),
            relaxation: self.relaxation.or(base.relaxation),
            output: self.output.or(base.output),
        }
    }
}

/// A fully resolved and checked solve request.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: String,
    pub alpha: FractionalOrder,
    pub horizon: f64,
    pub x0: f64,
    pub n_steps: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub relaxation: f64,
    pub output: PathBuf,
}

impl RunConfig {
    pub fn sweep_options(&self) -> SweepOptions {
        SweepOptions {
            max_iters: self.max_iters,
            tol: self.tol,
            relaxation: self.relaxation,
            initial_control: None,
        }
    }
}

/// Fills defaults and checks every field. An `alphas` list yields one run per
/// order, each writing `<stem>_alpha<α>.<ext>` next to the configured output.
pub fn resolve(partial: PartialConfig) -> Result<Vec<RunConfig>> {
    let problem = partial.problem.unwrap_or_else(|| DEFAULT_PROBLEM.into());
    if problems::lookup(&problem).is_none() {
        bail!(
            "unknown problem '{problem}'; available: {}",
            problems::names().join(", ")
        );
    }
    let horizon = partial.horizon.unwrap_or(DEFAULT_HORIZON);
    if !horizon.is_finite() || horizon <= 0.0 {
        bail!("--T must be a positive horizon, got {horizon}");
    }
    let x0 = partial.x0.unwrap_or(DEFAULT_X0);
    if !x0.is_finite() {
        bail!("--x0 must be finite, got {x0}");
    }
    let n_steps = partial.n_steps.unwrap_or(DEFAULT_N_STEPS);
    if n_steps < 2 {
        bail!("--n must be at least 2, got {n_steps}");
    }
    let max_iters = partial.max_iters.unwrap_or(DEFAULT_MAX_ITERS);
    if max_iters == 0 {
        bail!("--max-iters must be at least 1");
    }
    let tol = partial.tol.unwrap_or(DEFAULT_TOL);
    if !(tol.is_finite() && tol > 0.0) {
        bail!("--tol must be positive, got {tol}");
    }
    let relaxation = partial.relaxation.unwrap_or(DEFAULT_RELAXATION);
    if !(0.0..1.0).contains(&relaxation) {
        bail!("--relaxation must lie in [0, 1), got {relaxation}");
    }
    let output = partial.output.unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT));

    let (alphas, fan_out) = match partial.alphas {
        Some(list) if !list.is_empty() => (list, true),
        Some(_) => bail!("--alphas needs at least one value"),
        None => (vec![partial.alpha.unwrap_or(DEFAULT_ALPHA)], false),
    };

    alphas
        .into_iter()
        .map(|a| {
            let alpha = FractionalOrder::new(a).map_err(|e| anyhow::anyhow!("--alpha: {e}"))?;
            let output = if fan_out { per_alpha_path(&output, a) } else { output.clone() };
            Ok(RunConfig {
                problem: problem.clone(),
                alpha,
                horizon,
                x0,
                n_steps,
                max_iters,
                tol,
                relaxation,
                output,
            })
        })
        .collect()
}

fn per_alpha_path(base: &Path, alpha: f64) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("solution");
    let name = match base.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_alpha{alpha}.{ext}"),
        None => format!("{stem}_alpha{alpha}"),
    };
    base.with_file_name(name)
}
