//! Time grids on `[0, b]` and weighted sample vectors.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    nodes: Vec<f64>,
    uniform: bool,
}

impl TimeGrid {
    pub fn new(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Contract("a time grid needs at least two nodes".into()));
        }
        if nodes[0] != 0.0 {
            return Err(Error::Contract("first grid node must be exactly 0".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(Error::Contract("grid nodes must be strictly increasing".into()));
        }
        let h = nodes[1];
        let uniform = nodes
            .iter()
            .enumerate()
            .all(|(i, &t)| (t - i as f64 * h).abs() <= 1e-12 * nodes[nodes.len() - 1]);
        Ok(TimeGrid { nodes, uniform })
    }

    /// `m` equal steps on `[0, b]`; the last node is exactly `b`.
    pub fn uniform(b: f64, m: usize) -> Result<Self> {
        if !(b > 0.0) || m == 0 {
            return Err(Error::Contract(format!("uniform grid needs b > 0 and m ≥ 1 (b={b}, m={m})")));
        }
        let mut nodes: Vec<f64> = (0..=m).map(|i| b * i as f64 / m as f64).collect();
        nodes[m] = b;
        Ok(TimeGrid { nodes, uniform: true })
    }

    /// Uniform grid whose first cell is split geometrically at `h/2, h/4, …, h/2^levels`.
    pub fn refined_uniform(b: f64, m: usize, levels: usize) -> Result<Self> {
        let base = TimeGrid::uniform(b, m)?;
        let h = base.nodes[1];
        let mut nodes = vec![0.0];
        nodes.extend((1..=levels).rev().map(|k| h * 0.5f64.powi(k as i32)));
        nodes.extend_from_slice(&base.nodes[1..]);
        let mut g = TimeGrid::new(nodes)?;
        g.uniform = levels == 0;
        Ok(g)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn horizon(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Index of the node within `tol` of `t`.
    pub fn find_node(&self, t: f64, tol: f64) -> Option<usize> {
        let i = self.nodes.partition_point(|&x| x < t);
        [i.wrapping_sub(1), i]
            .into_iter()
            .filter(|&j| j < self.nodes.len())
            .find(|&j| (self.nodes[j] - t).abs() <= tol)
    }
}

/// Samples `w_i = t_i^{1−α} x(t_i)`; the entry at `t = 0` is the continuous extension.
///
/// `alpha` is the weight exponent, so `x(t) = t^{α−1} w(t)`. Values of `alpha`
/// outside `(0, 1]` are allowed for the outputs of integral and derivative operators.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSamples {
    pub grid: TimeGrid,
    pub weighted_values: Vec<f64>,
    pub alpha: f64,
}

impl WeightedSamples {
    pub fn new(grid: TimeGrid, weighted_values: Vec<f64>, alpha: f64) -> Result<Self> {
        if weighted_values.len() != grid.len() {
            return Err(Error::Contract(format!(
                "{} samples for a grid of {} nodes",
                weighted_values.len(),
                grid.len()
            )));
        }
        if weighted_values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite weighted sample".into()));
        }
        Ok(WeightedSamples {
            grid,
            weighted_values,
            alpha,
        })
    }

    /// Samples a function given by its weighted representative `w(t)`.
    pub fn from_weighted_fn(grid: TimeGrid, alpha: f64, w: impl Fn(f64) -> f64) -> Result<Self> {
        let vals = grid.nodes().iter().map(|&t| w(t)).collect();
        Self::new(grid, vals, alpha)
    }

    /// Samples a plain function that is finite at 0 (weight exponent 1).
    pub fn from_fn(grid: TimeGrid, x: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_weighted_fn(grid, 1.0, x)
    }

    /// Point values `x(t_i)` for `t_i > 0`.
    pub fn value_at(&self, i: usize) -> f64 {
        let t = self.grid.nodes()[i];
        t.powf(self.alpha - 1.0) * self.weighted_values[i]
    }

    pub fn weighted_sup(&self) -> f64 {
        self.weighted_values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
