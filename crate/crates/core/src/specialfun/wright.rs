//! One-sided stable density `ω_α` and the Wright-type density `ξ_α`.
//!
//! `ξ_α(θ) = (1/α) θ^{−1−1/α} ω_α(θ^{−1/α})`. The ω-series converges for every
//! θ > 0 but cancels badly for small θ; ξ is therefore evaluated from its own
//! power series near the origin and from a Kanter-type integral further out.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use super::mittag_leffler::rgamma;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_breaks, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrightDensity {
    alpha: f64,
    series_terms: usize,
}

/// Partial sum together with an estimate of the truncation error.
#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: f64,
    pub truncation_error: f64,
}

impl WrightDensity {
    pub fn new(alpha: f64, series_terms: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!("alpha = {alpha} outside (0, 1)")));
        }
        if series_terms == 0 {
            return Err(Error::Domain("series_terms must be positive".into()));
        }
        Ok(WrightDensity { alpha, series_terms })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn series_terms(&self) -> usize {
        self.series_terms
    }

    /// ξ_α(θ) for θ ≥ 0.
    pub fn xi(&self, theta: f64) -> Result<f64> {
        if theta < 0.0 || !theta.is_finite() {
            return Err(Error::Domain(format!("theta = {theta} must be nonnegative")));
        }
        if theta <= 1.0 {
            if let Some(v) = self.xi_series(theta) {
                return Ok(v);
            }
        }
        self.xi_integral(theta)
    }

    fn xi_series(&self, theta: f64) -> Option<f64> {
        let a = self.alpha;
        let mut sum = 0.0;
        let mut biggest: f64 = 0.0;
        let mut quiet = 0;
        for n in 0..500 {
            let nf = n as f64;
            let mag = if theta == 0.0 {
                if n == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (nf * theta.ln() - ln_gamma(nf + 1.0)).exp()
            };
            let t = if n % 2 == 0 { mag } else { -mag } * rgamma(1.0 - a - a * nf);
            sum += t;
            biggest = biggest.max(t.abs());
            quiet = if t.abs() <= 1e-17 * biggest { quiet + 1 } else { 0 };
            if quiet >= 3 {
                return (biggest * 1e-15 < 1e-13).then_some(sum);
            }
        }
        None
    }

    fn xi_integral(&self, theta: f64) -> Result<f64> {
        let a = self.alpha;
        let q = 1.0 / (1.0 - a);
        let scale = theta.powf(q);
        let shape = |phi: f64| {
            (a * phi).sin().powf(a * q) * ((1.0 - a) * phi).sin() / phi.sin().powf(q)
        };
        let f = |phi: f64| {
            let s = shape(phi);
            let e = (-scale * s).exp();
            if e == 0.0 {
                0.0
            } else {
                s * e
            }
        };
        let r = integrate(f, 0.0, PI, Tolerance::new(1e-300, 1e-13));
        if !r.converged {
            return Err(Error::Range(format!(
                "Wright density quadrature did not converge at theta = {theta}"
            )));
        }
        Ok(theta.powf(a * q) * r.value / (PI * (1.0 - a)))
    }

    /// α ∫₀^∞ θ ξ_α(θ) e^{−zθ} dθ, which equals E_{α,α}(−z).
    pub fn laplace_moment(&self, z: f64) -> Result<f64> {
        let g = |th: f64| th * self.xi(th).unwrap_or(f64::NAN) * (-z * th).exp();
        let cut = self.cutoff(|th| g(th).abs(), 1e-14)?;
        let r = self.integrate_density(g, cut)?;
        Ok(self.alpha * r)
    }

    /// ∫₀^∞ ξ_α(θ) dθ.
    pub fn normalization(&self) -> Result<f64> {
        let g = |th: f64| self.xi(th).unwrap_or(f64::NAN);
        let cut = self.cutoff(|th| g(th).abs(), 1e-16)?;
        self.integrate_density(g, cut)
    }

    fn cutoff<F: Fn(f64) -> f64>(&self, f: F, level: f64) -> Result<f64> {
        let mut th = 1.0;
        while th < 1e6 {
            th *= 1.25;
            let v = f(th);
            if v.is_nan() {
                return Err(Error::Range(format!("density unavailable at theta = {th}")));
            }
            if v < level && f(0.8 * th) < 10.0 * level {
                return Ok(th);
            }
        }
        Err(Error::Range("density tail does not decay".into()))
    }

    fn integrate_density<F: Fn(f64) -> f64>(&self, f: F, cut: f64) -> Result<f64> {
        let mut breaks = vec![0.0, 0.5, 1.0];
        let mut b = 1.0;
        while b < cut {
            b = (b * 1.5).min(cut);
            breaks.push(b);
        }
        let mut g = |t: f64| f(t);
        let r = integrate_breaks(&mut g, &breaks, Tolerance::new(1e-15, 1e-12));
        if r.value.is_nan() {
            return Err(Error::Range("density evaluation failed".into()));
        }
        Ok(r.value)
    }
}

/// Partial sum of `(1/π) Σ (−1)^{n−1} θ^{−nα−1} Γ(nα+1)/n! sin(πnα)`.
pub fn wright_omega(w: WrightDensity, theta: f64) -> Result<SeriesValue> {
    if !(theta > 0.0) || !theta.is_finite() {
        return Err(Error::Domain(format!("theta = {theta} must be positive")));
    }
    let a = w.alpha;
    let lt = theta.ln();
    let mut sum = 0.0;
    let mut biggest: f64 = 0.0;
    for n in 1..=w.series_terms {
        let nf = n as f64;
        let mag = (-(nf * a + 1.0) * lt + ln_gamma(nf * a + 1.0) - ln_gamma(nf + 1.0)).exp();
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let t = sign * mag * (PI * nf * a).sin() / PI;
        sum += t;
        biggest = biggest.max(t.abs());
    }
    // Magnitude bound of the first omitted term.
    let next = {
        let nf = (w.series_terms + 1) as f64;
        (-(nf * a + 1.0) * lt + ln_gamma(nf * a + 1.0) - ln_gamma(nf + 1.0)).exp() / PI
    };
    let truncation_error = next;
    let roundoff = biggest * f64::EPSILON * w.series_terms as f64;
    if !sum.is_finite() || (truncation_error > 1e-8 * sum.abs() && truncation_error > 1e-12) {
        return Err(Error::Range(format!(
            "omega series has not converged at theta = {theta}; use the xi route"
        )));
    }
    if roundoff > 1e-8 * sum.abs().max(1e-300) {
        return Err(Error::Range(format!(
            "omega series loses all accuracy to cancellation at theta = {theta}; use the xi route"
        )));
    }
    Ok(SeriesValue {
        value: sum,
        truncation_error: truncation_error + roundoff,
    })
}
