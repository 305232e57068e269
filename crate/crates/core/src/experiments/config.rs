//! Experiment configuration files and built-in presets.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::system_model::{
    CappedAbs, ControlOperator, NonlocalCondition, NonsmoothTerm, ProblemConfig, SpectralOperator, WeightedAbs,
    ZeroTerm,
};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub preset: Option<String>,
    pub grid_size: Option<usize>,
    pub refinement_levels: Option<usize>,
    pub a_grid: Option<Vec<f64>>,
    pub output_path: Option<String>,
    pub target_x1: Option<Vec<f64>>,
    pub max_iters: Option<usize>,
    pub tol: Option<f64>,
    pub relaxation: Option<f64>,
    pub simulate_control: Option<f64>,
    #[serde(default)]
    pub problem: RawProblem,
    #[serde(default)]
    pub nonsmooth: RawNonsmooth,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawProblem {
    pub alpha: Option<f64>,
    pub horizon_b: Option<f64>,
    pub eigenvalues: Option<Vec<f64>>,
    pub mode_labels: Option<Vec<String>>,
    pub b_coeffs: Option<Vec<f64>>,
    pub semigroup_bound_m: Option<f64>,
    pub holder_gamma: Option<f64>,
    pub assumption_override: Option<bool>,
    pub compact_semigroup: Option<bool>,
    pub measurable_forcing: Option<bool>,
    #[serde(default)]
    pub nonlocal: RawNonlocal,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNonlocal {
    pub coefficients: Option<Vec<f64>>,
    pub times: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNonsmooth {
    /// `zero`, `weighted_abs`, or `capped_abs`.
    pub kind: Option<String>,
    pub scale: Option<f64>,
    pub cap: Option<f64>,
}

macro_rules! overlay {
    ($dst:expr, $src:expr, $($f:ident),+) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )+
    };
}

impl RawConfig {
    /// Fields set in `other` replace those in `self`.
    pub fn overlay(&mut self, other: &RawConfig) {
        overlay!(self, other, preset, grid_size, refinement_levels, a_grid, output_path, target_x1, max_iters, tol, relaxation, simulate_control);
        let (p, q) = (&mut self.problem, &other.problem);
        overlay!(p, q, alpha, horizon_b, eigenvalues, mode_labels, b_coeffs, semigroup_bound_m, holder_gamma, assumption_override, compact_semigroup, measurable_forcing);
        overlay!(p.nonlocal, q.nonlocal, coefficients, times);
        overlay!(self.nonsmooth, other.nonsmooth, kind, scale, cap);
    }
}

pub const PRESETS: [&str; 2] = ["heat", "scalar"];

/// Heat conduction on `(0, π)` with Dirichlet modes, distributed actuator `b(y) = y`.
pub fn heat_preset() -> RawConfig {
    let n = 8;
    let op = SpectralOperator::dirichlet_laplacian(n);
    let s = (std::f64::consts::PI / 2.0).sqrt();
    let mut x1 = vec![0.0; n];
    x1[0] = s;
    x1[1] = 0.5 * s;
    RawConfig {
        preset: Some("heat".into()),
        grid_size: Some(200),
        refinement_levels: Some(24),
        a_grid: Some((0..=6).map(|k| 10f64.powi(-k)).collect()),
        output_path: Some("sweep.csv".into()),
        target_x1: Some(x1),
        max_iters: Some(50),
        tol: Some(1e-10),
        relaxation: Some(1.0),
        simulate_control: Some(1.0),
        problem: RawProblem {
            alpha: Some(0.75),
            horizon_b: Some(1.0),
            eigenvalues: Some(op.eigenvalues().to_vec()),
            mode_labels: Some(op.mode_labels().to_vec()),
            b_coeffs: Some(ControlOperator::linear_profile(n).b_coeffs().to_vec()),
            semigroup_bound_m: Some(1.0),
            holder_gamma: Some(0.0),
            assumption_override: Some(false),
            compact_semigroup: Some(true),
            measurable_forcing: Some(true),
            nonlocal: RawNonlocal {
                coefficients: Some(vec![0.1, 0.05]),
                times: Some(vec![0.25, 0.5]),
            },
        },
        nonsmooth: RawNonsmooth {
            kind: Some("weighted_abs".into()),
            scale: Some(0.1),
            cap: None,
        },
    }
}

/// One mode, `λ = 1`, unit actuation, no nonlocal terms, no nonsmooth term.
pub fn scalar_preset() -> RawConfig {
    RawConfig {
        preset: Some("scalar".into()),
        grid_size: Some(200),
        refinement_levels: Some(24),
        a_grid: Some((0..=6).map(|k| 10f64.powi(-k)).collect()),
        output_path: Some("sweep.csv".into()),
        target_x1: Some(vec![1.0]),
        max_iters: Some(50),
        tol: Some(1e-10),
        relaxation: Some(1.0),
        simulate_control: Some(1.0),
        problem: RawProblem {
            alpha: Some(0.75),
            horizon_b: Some(1.0),
            eigenvalues: Some(vec![1.0]),
            mode_labels: Some(vec!["e1".into()]),
            b_coeffs: Some(vec![1.0]),
            semigroup_bound_m: Some(1.0),
            holder_gamma: Some(0.0),
            assumption_override: Some(false),
            compact_semigroup: Some(true),
            measurable_forcing: Some(true),
            nonlocal: RawNonlocal {
                coefficients: Some(vec![]),
                times: Some(vec![]),
            },
        },
        nonsmooth: RawNonsmooth {
            kind: Some("zero".into()),
            scale: None,
            cap: None,
        },
    }
}

pub fn preset(name: &str) -> Result<RawConfig> {
    match name {
        "heat" => Ok(heat_preset()),
        "scalar" => Ok(scalar_preset()),
        other => Err(Error::validation(
            "preset",
            format!("unknown preset `{other}` (available: {})", PRESETS.join(", ")),
        )),
    }
}

/// Fully resolved and validated experiment settings.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub problem: ProblemConfig,
    pub grid_size: usize,
    pub refinement_levels: usize,
    pub a_grid: Vec<f64>,
    pub output_path: String,
    pub target_x1: Vec<f64>,
    pub max_iters: usize,
    pub tol: f64,
    pub relaxation: f64,
    pub simulate_control: f64,
    pub preset: Option<String>,
    /// SHA-256 of the resolved configuration document.
    pub sha256: String,
}

impl ExperimentConfig {
    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::refined_uniform(self.problem.horizon_b, self.grid_size, self.refinement_levels)
    }
}

fn need<T: Clone>(v: &Option<T>, key: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::validation(key, "missing required value"))
}

fn nonsmooth_term(raw: &RawNonsmooth, modes: usize) -> Result<Arc<dyn NonsmoothTerm>> {
    let kind = raw.kind.as_deref().unwrap_or("zero");
    let scale = || -> Result<f64> {
        let s = need(&raw.scale, "nonsmooth.scale")?;
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::validation("nonsmooth.scale", format!("{s} must be finite and ≥ 0")));
        }
        Ok(s)
    };
    match kind {
        "zero" => Ok(Arc::new(ZeroTerm { modes })),
        "weighted_abs" => Ok(Arc::new(WeightedAbs::uniform(scale()?, modes))),
        "capped_abs" => {
            let cap = need(&raw.cap, "nonsmooth.cap")?;
            if !(cap > 0.0) {
                return Err(Error::validation("nonsmooth.cap", format!("{cap} must be positive")));
            }
            Ok(Arc::new(CappedAbs::uniform(scale()?, modes, cap)))
        }
        other => Err(Error::validation(
            "nonsmooth.kind",
            format!("unknown kind `{other}` (zero, weighted_abs, capped_abs)"),
        )),
    }
}

/// Resolves presets and validates every field.
pub fn resolve(raw: &RawConfig) -> Result<ExperimentConfig> {
    let mut merged = match &raw.preset {
        Some(name) => preset(name)?,
        None => RawConfig::default(),
    };
    merged.overlay(raw);
    let p = &merged.problem;
    let eigenvalues = need(&p.eigenvalues, "problem.eigenvalues")?;
    let n = eigenvalues.len();
    let labels = p
        .mode_labels
        .clone()
        .unwrap_or_else(|| (1..=n).map(|i| format!("e{i}")).collect());
    let operator = SpectralOperator::new(eigenvalues, labels)?;
    let control = ControlOperator::new(need(&p.b_coeffs, "problem.b_coeffs")?)?;
    let coefficients = p.nonlocal.coefficients.clone().unwrap_or_default();
    let times = p.nonlocal.times.clone().unwrap_or_default();
    if coefficients.len() != times.len() {
        return Err(Error::validation(
            "problem.nonlocal.times",
            format!("{} times for {} coefficients", times.len(), coefficients.len()),
        ));
    }
    let mut problem = ProblemConfig {
        alpha: need(&p.alpha, "problem.alpha")?,
        horizon_b: need(&p.horizon_b, "problem.horizon_b")?,
        operator,
        control,
        nonlocal: NonlocalCondition::new(coefficients, times),
        nonsmooth: nonsmooth_term(&merged.nonsmooth, n)?,
        semigroup_bound_m: p.semigroup_bound_m.unwrap_or(1.0),
        holder_gamma: p.holder_gamma.unwrap_or(0.0),
        assumption_override: p.assumption_override.unwrap_or(false),
        compact_semigroup: p.compact_semigroup.unwrap_or(true),
        measurable_forcing: p.measurable_forcing.unwrap_or(true),
    };
    problem.validate()?;

    let grid_size = merged.grid_size.unwrap_or(200);
    if grid_size < 4 {
        return Err(Error::validation("grid_size", format!("{grid_size} is below the minimum of 4")));
    }
    let refinement_levels = merged.refinement_levels.unwrap_or(24);
    if refinement_levels > 60 {
        return Err(Error::validation("refinement_levels", "must not exceed 60"));
    }
    let grid = TimeGrid::refined_uniform(problem.horizon_b, grid_size, refinement_levels)?;
    for (k, t) in problem.nonlocal.times.iter_mut().enumerate() {
        match grid.find_node(*t, 1e-12) {
            Some(i) => *t = grid.nodes()[i],
            None => {
                return Err(Error::validation(
                    format!("problem.nonlocal.times[{k}]"),
                    format!("t_k = {t} is not within 1e-12 of a node of the {grid_size}-step grid"),
                ))
            }
        }
    }

    let a_grid = merged.a_grid.clone().unwrap_or_default();
    if a_grid.is_empty() {
        return Err(Error::validation("a_grid", "a_grid must be nonempty"));
    }
    if a_grid.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
        return Err(Error::validation("a_grid", "every entry must be positive and finite"));
    }
    if a_grid.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::validation("a_grid", "a_grid must be strictly decreasing"));
    }
    let target_x1 = merged.target_x1.clone().unwrap_or_else(|| vec![0.0; n]);
    if target_x1.len() != n || target_x1.iter().any(|v| !v.is_finite()) {
        return Err(Error::validation(
            "target_x1",
            format!("needs {n} finite entries, got {}", target_x1.len()),
        ));
    }
    let max_iters = merged.max_iters.unwrap_or(50);
    if max_iters == 0 {
        return Err(Error::validation("max_iters", "must be at least 1"));
    }
    let tol = merged.tol.unwrap_or(1e-10);
    if !(tol > 0.0) {
        return Err(Error::validation("tol", format!("{tol} must be positive")));
    }
    let relaxation = merged.relaxation.unwrap_or(1.0);
    if !(relaxation > 0.0 && relaxation <= 1.0) {
        return Err(Error::validation("relaxation", format!("{relaxation} outside (0, 1]")));
    }
    let simulate_control = merged.simulate_control.unwrap_or(1.0);
    if !simulate_control.is_finite() {
        return Err(Error::validation("simulate_control", "must be finite"));
    }
    let doc = toml::to_string(&merged).map_err(|e| Error::Numeric(format!("cannot serialize config: {e}")))?;
    let sha256 = Sha256::digest(doc.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    Ok(ExperimentConfig {
        problem,
        grid_size,
        refinement_levels,
        a_grid,
        output_path: merged.output_path.clone().unwrap_or_else(|| "sweep.csv".into()),
        target_x1,
        max_iters,
        tol,
        relaxation,
        simulate_control,
        preset: merged.preset.clone(),
        sha256,
    })
}

pub fn parse_config(text: &str, origin: &Path) -> Result<RawConfig> {
    toml::from_str(text).map_err(|e| Error::Parse {
        path: origin.display().to_string(),
        message: e.to_string(),
    })
}

/// Reads, overlays on the named preset, and validates a configuration file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    resolve(&parse_config(&text, path)?)
}
