//! Mittag-Leffler and Wright functions, and the scalar action of the
//! fractional solution operator on eigenmodes.

mod mittag_leffler;
mod table;
mod wright;

use std::sync::Arc;

pub use mittag_leffler::{mittag_leffler, rgamma, MLParams};
pub use table::MlTable;
pub use wright::{wright_omega, SeriesValue, WrightDensity};

use crate::error::{Error, Result};

/// E_{α,α}(−λ t^α): the solution operator acting on an eigenvector with eigenvalue −λ.
pub fn solution_operator_scalar(alpha: f64, lambda: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t = {t} must be positive")));
    }
    if lambda < 0.0 {
        return Err(Error::Domain(format!("lambda = {lambda} must be nonnegative")));
    }
    mittag_leffler(MLParams::new(alpha, alpha)?, -lambda * t.powf(alpha))
}

/// Tables for β ∈ {α, α+1, α+2} shared by all modes of one system.
#[derive(Debug, Clone)]
pub struct MlFamily {
    alpha: f64,
    e0: MlTable,
    e1: MlTable,
    e2: MlTable,
}

impl MlFamily {
    /// Covers arguments `λ σ^α ≤ x_max` exactly by interpolation.
    pub fn new(alpha: f64, x_max: f64) -> Result<Self> {
        Ok(MlFamily {
            alpha,
            e0: MlTable::new(MLParams::new(alpha, alpha)?, x_max)?,
            e1: MlTable::new(MLParams::new(alpha, alpha + 1.0)?, x_max)?,
            e2: MlTable::new(MLParams::new(alpha, alpha + 2.0)?, x_max)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// Per-mode scalar evaluator for `E_{α,α}(−λ t^α)` and its kernel antiderivatives.
#[derive(Debug, Clone)]
pub struct ModeEvaluator {
    lambda: f64,
    family: Arc<MlFamily>,
}

impl ModeEvaluator {
    pub fn new(lambda: f64, family: Arc<MlFamily>) -> Self {
        ModeEvaluator { lambda, family }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.family.alpha
    }

    /// E_{α,α}(−λ t^α), t ≥ 0.
    #[inline]
    pub fn solution_operator(&self, t: f64) -> f64 {
        let x = self.lambda * t.powf(self.family.alpha);
        self.family.e0.eval(x).unwrap_or(f64::NAN)
    }

    /// E_{α,α}(−x) from the scaled argument `x = λ t^α`.
    #[inline]
    pub fn solution_operator_pow(&self, x: f64) -> f64 {
        self.family.e0.eval(x).unwrap_or(f64::NAN)
    }

    /// k(σ) = σ^{α−1} E_{α,α}(−λ σ^α).
    #[inline]
    pub fn kernel(&self, sigma: f64) -> f64 {
        let a = self.family.alpha;
        let sa = sigma.powf(a);
        sa / sigma * self.family.e0.eval(self.lambda * sa).unwrap_or(f64::NAN)
    }

    /// ∫₀^σ k = σ^α E_{α,α+1}(−λ σ^α).
    #[inline]
    pub fn kernel_integral(&self, sigma: f64) -> f64 {
        if sigma <= 0.0 {
            return 0.0;
        }
        let sa = sigma.powf(self.family.alpha);
        sa * self.family.e1.eval(self.lambda * sa).unwrap_or(f64::NAN)
    }

    /// ∫₀^σ ∫₀^τ k = σ^{α+1} E_{α,α+2}(−λ σ^α).
    #[inline]
    pub fn kernel_double_integral(&self, sigma: f64) -> f64 {
        if sigma <= 0.0 {
            return 0.0;
        }
        let sa = sigma.powf(self.family.alpha);
        sa * sigma * self.family.e2.eval(self.lambda * sa).unwrap_or(f64::NAN)
    }
}
