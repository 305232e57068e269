//! Piecewise Chebyshev tables of `x ↦ E_{α,β}(−x)` on `[0, x_max]`.

use std::f64::consts::PI;

use super::mittag_leffler::{mittag_leffler, MLParams};
use crate::error::Result;

const DEGREE: usize = 24;
const MAX_DEPTH: usize = 12;

#[derive(Debug, Clone)]
struct Piece {
    lo: f64,
    hi: f64,
    coeffs: [f64; DEGREE + 1],
}

impl Piece {
    fn fit(p: MLParams, lo: f64, hi: f64) -> Result<Self> {
        let n = DEGREE + 1;
        let mut vals = [0.0; DEGREE + 1];
        for (k, v) in vals.iter_mut().enumerate() {
            let theta = PI * (k as f64 + 0.5) / n as f64;
            let x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * theta.cos();
            *v = mittag_leffler(p, -x)?;
        }
        let mut coeffs = [0.0; DEGREE + 1];
        for (j, c) in coeffs.iter_mut().enumerate() {
            let mut s = 0.0;
            for (k, v) in vals.iter().enumerate() {
                s += v * (PI * j as f64 * (k as f64 + 0.5) / n as f64).cos();
            }
            *c = s * 2.0 / n as f64;
        }
        coeffs[0] *= 0.5;
        Ok(Piece { lo, hi, coeffs })
    }

    #[inline]
    fn eval(&self, x: f64) -> f64 {
        let u = (2.0 * x - self.lo - self.hi) / (self.hi - self.lo);
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs[1..].iter().rev() {
            let b0 = 2.0 * u * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        u * b1 - b2 + self.coeffs[0]
    }
}

/// Interpolation table verified against direct evaluation at off-node points.
#[derive(Debug, Clone)]
pub struct MlTable {
    params: MLParams,
    x_max: f64,
    breaks: Vec<f64>,
    pieces: Vec<Piece>,
}

impl MlTable {
    pub fn new(params: MLParams, x_max: f64) -> Result<Self> {
        let x_max = x_max.max(1.0);
        let mut edges = vec![0.0, 1.0];
        while *edges.last().unwrap() < x_max {
            let next = (edges.last().unwrap() * 2.0).min(x_max);
            edges.push(next);
        }
        let mut pieces = Vec::new();
        for w in edges.windows(2) {
            build(params, w[0], w[1], 0, &mut pieces)?;
        }
        let breaks = pieces.iter().map(|p| p.hi).collect();
        Ok(MlTable {
            params,
            x_max,
            breaks,
            pieces,
        })
    }

    pub fn params(&self) -> MLParams {
        self.params
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// E_{α,β}(−x) for x ≥ 0; falls back to direct evaluation outside the table.
    #[inline]
    pub fn eval(&self, x: f64) -> Result<f64> {
        if (0.0..=self.x_max).contains(&x) {
            let i = self.breaks.partition_point(|&b| b < x).min(self.pieces.len() - 1);
            Ok(self.pieces[i].eval(x))
        } else {
            mittag_leffler(self.params, -x)
        }
    }
}

fn build(p: MLParams, lo: f64, hi: f64, depth: usize, out: &mut Vec<Piece>) -> Result<()> {
    let piece = Piece::fit(p, lo, hi)?;
    let mut worst: f64 = 0.0;
    let probes = DEGREE;
    for k in 0..probes {
        let x = lo + (hi - lo) * (k as f64 + 0.37) / probes as f64;
        let exact = mittag_leffler(p, -x)?;
        let err = (piece.eval(x) - exact).abs() / (1e-14 + exact.abs());
        worst = worst.max(err);
    }
    if worst <= 2e-13 || depth >= MAX_DEPTH {
        out.push(piece);
        Ok(())
    } else {
        let mid = 0.5 * (lo + hi);
        build(p, lo, mid, depth + 1, out)?;
        build(p, mid, hi, depth + 1, out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_matches_direct_evaluation() {
        for (a, b) in [(0.75, 0.75), (0.75, 1.75), (0.75, 2.75), (0.6, 0.6)] {
            let p = MLParams::new(a, b).unwrap();
            let t = MlTable::new(p, 64.0).unwrap();
            for k in 0..300 {
                let x = 64.0 * (k as f64 / 299.0).powi(2);
                let d = mittag_leffler(p, -x).unwrap();
                let v = t.eval(x).unwrap();
                assert!((d - v).abs() <= 1e-14 + 1e-12 * d.abs(), "a={a} b={b} x={x}: {v} vs {d}");
            }
        }
    }
}
