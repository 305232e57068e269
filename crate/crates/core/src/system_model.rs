//! Truncated spectral system: operator, actuation, nonlocal data, nonsmooth
//! forcing term, and the finitely checkable hypotheses on them.

use std::fmt;
use std::sync::Arc;

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};

/// Diagonal generator: `A e_n = −λ_n e_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOperator {
    eigenvalues: Vec<f64>,
    mode_labels: Vec<String>,
}

impl SpectralOperator {
    pub fn new(eigenvalues: Vec<f64>, mode_labels: Vec<String>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::validation("problem.eigenvalues", "at least one mode is required"));
        }
        if let Some(i) = eigenvalues.iter().position(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(Error::validation(
                format!("problem.eigenvalues[{i}]"),
                format!("λ = {} must be positive", eigenvalues[i]),
            ));
        }
        if let Some(i) = eigenvalues.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::validation(
                format!("problem.eigenvalues[{}]", i + 1),
                "eigenvalues must be strictly increasing (simple spectrum)",
            ));
        }
        if mode_labels.len() != eigenvalues.len() {
            return Err(Error::validation(
                "problem.mode_labels",
                format!("{} labels for {} modes", mode_labels.len(), eigenvalues.len()),
            ));
        }
        Ok(SpectralOperator {
            eigenvalues,
            mode_labels,
        })
    }

    /// λ_n = n² with labels `√(2/π) sin(ny)` on `[0, π]`.
    pub fn dirichlet_laplacian(n: usize) -> Self {
        SpectralOperator {
            eigenvalues: (1..=n).map(|k| (k * k) as f64).collect(),
            mode_labels: (1..=n).map(|k| format!("√(2/π)sin({k}y)")).collect(),
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn mode_labels(&self) -> &[String] {
        &self.mode_labels
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Rank-one actuation `(Bu) = u Σ b_n e_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlOperator {
    b_coeffs: Vec<f64>,
    operator_norm: f64,
}

impl ControlOperator {
    pub fn new(b_coeffs: Vec<f64>) -> Result<Self> {
        if let Some(i) = b_coeffs.iter().position(|b| !b.is_finite()) {
            return Err(Error::validation(format!("problem.b_coeffs[{i}]"), "must be finite"));
        }
        let operator_norm = b_coeffs.iter().map(|b| b * b).sum::<f64>().sqrt();
        Ok(ControlOperator {
            b_coeffs,
            operator_norm,
        })
    }

    /// Coefficients `⟨y, √(2/π) sin ny⟩ = √(2π) (−1)^{n+1} / n` of `b(y) = y` on `[0, π]`.
    pub fn linear_profile(n: usize) -> Self {
        let c = (2.0 * std::f64::consts::PI).sqrt();
        let b = (1..=n)
            .map(|k| if k % 2 == 1 { c / k as f64 } else { -c / k as f64 })
            .collect();
        ControlOperator::new(b).expect("finite coefficients")
    }

    pub fn b_coeffs(&self) -> &[f64] {
        &self.b_coeffs
    }

    pub fn operator_norm(&self) -> f64 {
        self.operator_norm
    }
}

/// `I^{1−α} x|₀ = Σ c_k x(t_k)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NonlocalCondition {
    pub coefficients: Vec<f64>,
    pub times: Vec<f64>,
}

impl NonlocalCondition {
    pub fn new(coefficients: Vec<f64>, times: Vec<f64>) -> Self {
        NonlocalCondition {
            coefficients,
            times,
        }
    }

    pub fn none() -> Self {
        NonlocalCondition::default()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    fn validate(&self, b: f64) -> Result<()> {
        if self.coefficients.len() != self.times.len() {
            return Err(Error::validation(
                "problem.nonlocal",
                format!(
                    "{} coefficients but {} times",
                    self.coefficients.len(),
                    self.times.len()
                ),
            ));
        }
        for (k, &c) in self.coefficients.iter().enumerate() {
            if c == 0.0 || !c.is_finite() {
                return Err(Error::validation(
                    format!("problem.nonlocal.coefficients[{k}]"),
                    format!("c_k = {c} violates the standing condition c_k ≠ 0"),
                ));
            }
        }
        for (k, &t) in self.times.iter().enumerate() {
            if !(t > 0.0 && t < b) {
                return Err(Error::validation(
                    format!("problem.nonlocal.times[{k}]"),
                    format!("t_k = {t} must lie in (0, b) with b = {b}"),
                ));
            }
            if k > 0 && t <= self.times[k - 1] {
                return Err(Error::validation(
                    format!("problem.nonlocal.times[{k}]"),
                    "collocation times must be strictly increasing",
                ));
            }
        }
        Ok(())
    }
}

/// Growth bound `‖∂F(t,x)‖ ≤ P(t) ψ(‖x‖)` with `P ∈ L^{1/γ}(0,b)`.
#[derive(Clone)]
pub struct GrowthBound {
    pub p: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub gamma: f64,
    pub psi: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl GrowthBound {
    pub fn constant(level: f64) -> Self {
        GrowthBound {
            p: Arc::new(|_| 1.0),
            gamma: 0.0,
            psi: Arc::new(move |_| level),
        }
    }
}

impl fmt::Debug for GrowthBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GrowthBound").field("gamma", &self.gamma).finish_non_exhaustive()
    }
}

/// Locally Lipschitz potential `F(t, x)` whose generalized gradient is a product
/// of per-mode intervals.
pub trait NonsmoothTerm: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn potential(&self, t: f64, x: &[f64]) -> f64;

    /// Per-mode bounds `[lo_n, hi_n]` of `∂F(t, x)`.
    fn subgradient_extremes(&self, t: f64, x: &[f64]) -> Vec<(f64, f64)>;

    /// Generalized directional derivative `F⁰(t, x; v)`.
    fn directional_derivative(&self, t: f64, x: &[f64], v: &[f64]) -> f64 {
        self.subgradient_extremes(t, x)
            .iter()
            .zip(v)
            .map(|(&(lo, hi), &vn)| (lo * vn).max(hi * vn))
            .sum()
    }

    fn growth(&self) -> GrowthBound;

    /// `L` with `‖∂F(t, x)‖ ≤ L` everywhere, when such a bound is declared.
    fn uniform_bound(&self) -> Option<f64>;
}

/// `F ≡ 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroTerm {
    pub modes: usize,
}

impl NonsmoothTerm for ZeroTerm {
    fn name(&self) -> &str {
        "zero"
    }
    fn potential(&self, _t: f64, _x: &[f64]) -> f64 {
        0.0
    }
    fn subgradient_extremes(&self, _t: f64, x: &[f64]) -> Vec<(f64, f64)> {
        vec![(0.0, 0.0); x.len()]
    }
    fn directional_derivative(&self, _t: f64, _x: &[f64], _v: &[f64]) -> f64 {
        0.0
    }
    fn growth(&self) -> GrowthBound {
        GrowthBound::constant(0.0)
    }
    fn uniform_bound(&self) -> Option<f64> {
        Some(0.0)
    }
}

/// `F(x) = L Σ ω_n |x_n − κ_n|`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedAbs {
    pub scale: f64,
    pub weights: Vec<f64>,
    pub centers: Vec<f64>,
}

impl WeightedAbs {
    /// Equal weights `1/√N`, so that `‖∂F‖ ≤ scale`.
    pub fn uniform(scale: f64, modes: usize) -> Self {
        WeightedAbs {
            scale,
            weights: vec![1.0 / (modes as f64).sqrt(); modes],
            centers: vec![0.0; modes],
        }
    }

    fn slope(&self, n: usize) -> f64 {
        self.scale * self.weights[n]
    }

    fn bound(&self) -> f64 {
        self.scale * self.weights.iter().map(|w| w * w).sum::<f64>().sqrt()
    }
}

impl NonsmoothTerm for WeightedAbs {
    fn name(&self) -> &str {
        "weighted_abs"
    }

    fn potential(&self, _t: f64, x: &[f64]) -> f64 {
        x.iter()
            .enumerate()
            .map(|(n, &xn)| self.slope(n) * (xn - self.centers[n]).abs())
            .sum()
    }

    fn subgradient_extremes(&self, _t: f64, x: &[f64]) -> Vec<(f64, f64)> {
        x.iter()
            .enumerate()
            .map(|(n, &xn)| {
                let s = self.slope(n);
                let d = xn - self.centers[n];
                if d > 0.0 {
                    (s, s)
                } else if d < 0.0 {
                    (-s, -s)
                } else {
                    (-s, s)
                }
            })
            .collect()
    }

    fn directional_derivative(&self, _t: f64, x: &[f64], v: &[f64]) -> f64 {
        x.iter()
            .zip(v)
            .enumerate()
            .map(|(n, (&xn, &vn))| {
                let d = xn - self.centers[n];
                let dir = if d == 0.0 { vn.abs() } else { d.signum() * vn };
                self.slope(n) * dir
            })
            .sum()
    }

    fn growth(&self) -> GrowthBound {
        GrowthBound::constant(self.bound())
    }

    fn uniform_bound(&self) -> Option<f64> {
        Some(self.bound())
    }
}

/// Nonconvex `F(x) = L Σ ω_n min(|x_n|, cap)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CappedAbs {
    pub scale: f64,
    pub weights: Vec<f64>,
    pub cap: f64,
}

impl CappedAbs {
    pub fn uniform(scale: f64, modes: usize, cap: f64) -> Self {
        CappedAbs {
            scale,
            weights: vec![1.0 / (modes as f64).sqrt(); modes],
            cap,
        }
    }

    fn bound(&self) -> f64 {
        self.scale * self.weights.iter().map(|w| w * w).sum::<f64>().sqrt()
    }
}

impl NonsmoothTerm for CappedAbs {
    fn name(&self) -> &str {
        "capped_abs"
    }

    fn potential(&self, _t: f64, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.weights)
            .map(|(&xn, &w)| self.scale * w * xn.abs().min(self.cap))
            .sum()
    }

    fn subgradient_extremes(&self, _t: f64, x: &[f64]) -> Vec<(f64, f64)> {
        x.iter()
            .zip(&self.weights)
            .map(|(&xn, &w)| {
                let s = self.scale * w;
                let a = xn.abs();
                if xn == 0.0 {
                    (-s, s)
                } else if a < self.cap {
                    let g = xn.signum() * s;
                    (g, g)
                } else if a > self.cap {
                    (0.0, 0.0)
                } else if xn > 0.0 {
                    (0.0, s)
                } else {
                    (-s, 0.0)
                }
            })
            .collect()
    }

    fn growth(&self) -> GrowthBound {
        GrowthBound::constant(self.bound())
    }

    fn uniform_bound(&self) -> Option<f64> {
        Some(self.bound())
    }
}

/// Complete data of the controlled nonlocal problem.
#[derive(Debug, Clone)]
pub struct ProblemConfig {
    pub alpha: f64,
    pub horizon_b: f64,
    pub operator: SpectralOperator,
    pub control: ControlOperator,
    pub nonlocal: NonlocalCondition,
    pub nonsmooth: Arc<dyn NonsmoothTerm>,
    pub semigroup_bound_m: f64,
    pub holder_gamma: f64,
    /// Proceed even when the nonlocal smallness condition fails.
    pub assumption_override: bool,
    /// Compactness of the solution operator; declared, not checked.
    pub compact_semigroup: bool,
    /// Measurability of the forcing in `t`; declared, not checked.
    pub measurable_forcing: bool,
}

impl ProblemConfig {
    pub fn truncation_n(&self) -> usize {
        self.operator.len()
    }

    pub fn validate(&self) -> Result<()> {
        let a = self.alpha;
        if !(a > 0.5 && a <= 1.0) {
            return Err(Error::validation(
                "problem.alpha",
                format!("α = {a} violates 1/2 < α ≤ 1"),
            ));
        }
        if !(self.horizon_b > 0.0 && self.horizon_b.is_finite()) {
            return Err(Error::validation(
                "problem.horizon_b",
                format!("b = {} must be positive", self.horizon_b),
            ));
        }
        if self.control.b_coeffs().len() != self.operator.len() {
            return Err(Error::validation(
                "problem.b_coeffs",
                format!(
                    "{} coefficients for truncation N = {}",
                    self.control.b_coeffs().len(),
                    self.operator.len()
                ),
            ));
        }
        self.nonlocal.validate(self.horizon_b)?;
        if !(self.semigroup_bound_m >= 1.0) {
            return Err(Error::validation(
                "problem.semigroup_bound_M",
                format!("M = {} must satisfy M ≥ 1", self.semigroup_bound_m),
            ));
        }
        if !(self.holder_gamma >= 0.0 && self.holder_gamma < a) {
            return Err(Error::validation(
                "problem.holder_gamma",
                format!("γ = {} violates 0 ≤ γ < α", self.holder_gamma),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallnessReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Nonlocal smallness condition `Σ|c_k t_k^{α−1}| < Γ(α)/M`.
pub fn check_assumption_smallness(cfg: &ProblemConfig) -> SmallnessReport {
    let lhs = cfg
        .nonlocal
        .coefficients
        .iter()
        .zip(&cfg.nonlocal.times)
        .map(|(c, t)| (c * t.powf(cfg.alpha - 1.0)).abs())
        .sum();
    let rhs = gamma(cfg.alpha) / cfg.semigroup_bound_m;
    SmallnessReport {
        lhs,
        rhs,
        holds: lhs < rhs,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthReport {
    pub rho_estimate: f64,
    pub p_norm: f64,
    pub holds: bool,
}

/// `‖P‖_{L^{1/γ}(0,b)}`; `γ = 0` is the sup norm.
pub fn p_norm(g: &GrowthBound, b: f64) -> Result<f64> {
    if g.gamma == 0.0 {
        let n = 4000;
        return Ok((0..=n)
            .map(|i| (g.p)(b * i as f64 / n as f64).abs())
            .fold(0.0, f64::max));
    }
    let q = 1.0 / g.gamma;
    let r = integrate(|t| (g.p)(t).abs().powf(q), 0.0, b, Tolerance::new(1e-8, 1e-8));
    if !r.converged {
        return Err(Error::Numeric("L^{1/γ} norm of P did not converge".into()));
    }
    Ok(r.value.powf(g.gamma))
}

/// Growth ratio `ψ(r)/r · ‖P‖` estimated on the last decade of `r_grid`.
pub fn check_growth_ratio(cfg: &ProblemConfig, r_grid: &[f64]) -> Result<GrowthReport> {
    growth_ratio(&cfg.nonsmooth.growth(), cfg.horizon_b, r_grid)
}

pub fn growth_ratio(g: &GrowthBound, b: f64, r_grid: &[f64]) -> Result<GrowthReport> {
    if r_grid.len() < 2 || r_grid.iter().any(|&r| !(r > 0.0)) || r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::validation("r_grid", "must be positive and strictly increasing"));
    }
    let (r0, r1) = (r_grid[0], r_grid[r_grid.len() - 1]);
    if r1 / r0 < 1e3 * (1.0 - 1e-12) {
        return Err(Error::validation("r_grid", "must span at least three decades"));
    }
    let psi: Vec<f64> = r_grid.iter().map(|&r| (g.psi)(r)).collect();
    if let Some(i) = psi.windows(2).position(|w| w[1] < w[0] - 1e-12 * w[0].abs()) {
        return Err(Error::validation(
            "nonsmooth.growth_psi",
            format!(
                "ψ must be nondecreasing, but ψ({}) > ψ({})",
                r_grid[i],
                r_grid[i + 1]
            ),
        ));
    }
    let pn = p_norm(g, b)?;
    let rho = r_grid
        .iter()
        .zip(&psi)
        .filter(|(&r, _)| r >= r1 / 10.0)
        .map(|(&r, &p)| p / r * pn)
        .fold(f64::INFINITY, f64::min);
    Ok(GrowthReport {
        rho_estimate: rho,
        p_norm: pn,
        holds: rho < 1.0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActuationReport {
    /// One-based mode numbers with `|b_n| < 1e−14`.
    pub zero_modes: Vec<usize>,
}

pub fn check_actuation_nondegeneracy(cfg: &ProblemConfig) -> ActuationReport {
    ActuationReport {
        zero_modes: cfg
            .control
            .b_coeffs()
            .iter()
            .enumerate()
            .filter(|(_, b)| b.abs() < 1e-14)
            .map(|(i, _)| i + 1)
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionRule {
    #[default]
    MinimalNorm,
    Midpoint,
    Lower,
}

/// One element of `∂F(t, x)` chosen by `rule`.
pub fn subgradient_selection(
    term: &dyn NonsmoothTerm,
    t: f64,
    x: &[f64],
    rule: SelectionRule,
) -> Result<Vec<f64>> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("non-finite state at t = {t}")));
    }
    term.subgradient_extremes(t, x)
        .into_iter()
        .enumerate()
        .map(|(n, (lo, hi))| {
            if lo > hi {
                return Err(Error::TermDefinition(format!(
                    "{}: empty subgradient interval [{lo}, {hi}] in mode {}",
                    term.name(),
                    n + 1
                )));
            }
            Ok(match rule {
                SelectionRule::MinimalNorm => 0.0f64.clamp(lo, hi),
                SelectionRule::Midpoint => 0.5 * (lo + hi),
                SelectionRule::Lower => lo,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(nonlocal: NonlocalCondition) -> ProblemConfig {
        ProblemConfig {
            alpha: 0.75,
            horizon_b: 1.0,
            operator: SpectralOperator::dirichlet_laplacian(2),
            control: ControlOperator::new(vec![1.0, 1.0]).unwrap(),
            nonlocal,
            nonsmooth: Arc::new(ZeroTerm::default()),
            semigroup_bound_m: 1.0,
            holder_gamma: 0.0,
            assumption_override: false,
            compact_semigroup: true,
            measurable_forcing: true,
        }
    }

    #[test]
    fn smallness_examples() {
        let r = check_assumption_smallness(&base(NonlocalCondition::new(vec![0.1], vec![0.5])));
        assert!((r.lhs - 0.118_920_711_500_272_1).abs() < 1e-15);
        assert!((r.rhs - 1.225_416_702_465_177_6).abs() < 1e-14);
        assert!(r.holds);
        let r = check_assumption_smallness(&base(NonlocalCondition::new(vec![3.0], vec![0.25])));
        assert!((r.lhs - 4.242_640_687_119_286).abs() < 1e-14);
        assert!(!r.holds);
        let r = check_assumption_smallness(&base(NonlocalCondition::new(vec![1e-300], vec![0.25])));
        assert!(r.holds);
    }

    #[test]
    fn validation_names_conditions() {
        let mut c = base(NonlocalCondition::new(vec![0.1, 0.0], vec![0.25, 0.5]));
        let e = c.validate().unwrap_err().to_string();
        assert!(e.contains("c_k ≠ 0") && e.contains("coefficients[1]"), "{e}");
        c.nonlocal = NonlocalCondition::none();
        c.alpha = 0.4;
        assert!(c.validate().unwrap_err().to_string().contains("1/2 < α ≤ 1"));
        c.alpha = 0.75;
        c.holder_gamma = 0.8;
        assert!(c.validate().unwrap_err().to_string().contains("0 ≤ γ < α"));
    }

    #[test]
    fn selection_rules() {
        let t = WeightedAbs::uniform(1.0, 1);
        let s = |x: f64, r| subgradient_selection(&t, 0.0, &[x], r).unwrap()[0];
        assert_eq!(s(0.0, SelectionRule::MinimalNorm), 0.0);
        assert_eq!(s(0.0, SelectionRule::Midpoint), 0.0);
        assert_eq!(s(0.0, SelectionRule::Lower), -1.0);
        for r in [SelectionRule::MinimalNorm, SelectionRule::Midpoint, SelectionRule::Lower] {
            assert_eq!(s(0.5, r), 1.0);
        }
    }

    #[derive(Debug)]
    struct Broken;
    impl NonsmoothTerm for Broken {
        fn name(&self) -> &str {
            "broken"
        }
        fn potential(&self, _t: f64, _x: &[f64]) -> f64 {
            0.0
        }
        fn subgradient_extremes(&self, _t: f64, x: &[f64]) -> Vec<(f64, f64)> {
            vec![(1.0, -1.0); x.len()]
        }
        fn growth(&self) -> GrowthBound {
            GrowthBound::constant(1.0)
        }
        fn uniform_bound(&self) -> Option<f64> {
            None
        }
    }

    #[test]
    fn empty_interval_is_rejected() {
        let e = subgradient_selection(&Broken, 0.0, &[1.0], SelectionRule::MinimalNorm);
        assert!(matches!(e, Err(Error::TermDefinition(_))));
    }

    #[test]
    fn growth_ratio_examples() {
        let grid: Vec<f64> = (0..=40).map(|k| 10f64.powf(k as f64 * 0.15)).collect();
        let sub = GrowthBound {
            p: Arc::new(|_| 0.5),
            gamma: 0.0,
            psi: Arc::new(|r: f64| 1.0 + (1.0 + r).ln()),
        };
        let r = growth_ratio(&sub, 1.0, &grid).unwrap();
        assert!(r.holds && r.rho_estimate < 1e-4);
        let lin = GrowthBound {
            p: Arc::new(|_| 1.0),
            gamma: 0.0,
            psi: Arc::new(|r: f64| 2.0 * r),
        };
        let r = growth_ratio(&lin, 1.0, &grid).unwrap();
        assert!((r.rho_estimate - 2.0).abs() < 1e-12 && !r.holds);
        let bad = GrowthBound {
            p: Arc::new(|_| 1.0),
            gamma: 0.0,
            psi: Arc::new(|r: f64| (r - 10.0).abs()),
        };
        assert!(matches!(growth_ratio(&bad, 1.0, &grid), Err(Error::Validation { .. })));
        assert!(growth_ratio(&lin, 1.0, &[1.0, 10.0]).is_err());
    }

    #[test]
    fn holder_norm_of_p() {
        let g = GrowthBound {
            p: Arc::new(|t: f64| t),
            gamma: 0.5,
            psi: Arc::new(|_| 1.0),
        };
        // (∫₀¹ t² dt)^{1/2}
        assert!((p_norm(&g, 1.0).unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-8);
    }

    #[test]
    fn actuation_examples() {
        let mut c = base(NonlocalCondition::none());
        assert!(check_actuation_nondegeneracy(&c).zero_modes.is_empty());
        c.control = ControlOperator::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(check_actuation_nondegeneracy(&c).zero_modes, vec![2]);
        let lin = ControlOperator::linear_profile(8);
        assert!(lin.b_coeffs().iter().all(|b| b.abs() > 0.3));
        assert!((lin.b_coeffs()[1] + (2.0 * std::f64::consts::PI).sqrt() / 2.0).abs() < 1e-15);
    }
}
