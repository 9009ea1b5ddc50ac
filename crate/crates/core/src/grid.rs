//! Uniform time grids and functions sampled on them.

use std::fmt;

use crate::error::{Error, Result};

/// Fractional order `α ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::Domain(format!(
                "fractional order must satisfy 0 < alpha <= 1, got {alpha}"
            )))
        }
    }

    /// The classical first-order case.
    pub const ONE: Self = Self(1.0);

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn is_integer(self) -> bool {
        self.0 == 1.0
    }
}

impl fmt::Display for FractionalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Uniform partition of `[t0, tf]` into `n_steps` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    tf: f64,
    n_steps: usize,
    h: f64,
}

impl TimeGrid {
    pub fn new(t0: f64, tf: f64, n_steps: usize) -> Result<Self> {
        if !(t0.is_finite() && tf.is_finite()) || tf <= t0 {
            return Err(Error::InvalidInput(format!(
                "time grid needs finite t0 < tf, got [{t0}, {tf}]"
            )));
        }
        if n_steps < 2 {
            return Err(Error::InvalidInput(format!(
                "time grid needs at least 2 steps, got {n_steps}"
            )));
        }
        Ok(Self {
            t0,
            tf,
            n_steps,
            h: (tf - t0) / n_steps as f64,
        })
    }

    #[inline]
    pub fn t0(&self) -> f64 {
        self.t0
    }

    #[inline]
    pub fn tf(&self) -> f64 {
        self.tf
    }

    #[inline]
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.n_steps + 1
    }

    #[inline]
    pub fn step(&self) -> f64 {
        self.h
    }

    /// Node `k`, i.e. `t0 + k h`; the last node is returned as `tf` exactly.
    #[inline]
    pub fn node(&self, k: usize) -> f64 {
        debug_assert!(k <= self.n_steps);
        if k == self.n_steps {
            self.tf
        } else {
            self.t0 + k as f64 * self.h
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(|k| self.node(k))
    }

    /// Index of the node nearest to `t`, clamped to the grid.
    pub fn nearest_index(&self, t: f64) -> usize {
        let k = ((t - self.t0) / self.h).round();
        if k <= 0.0 {
            0
        } else {
            (k as usize).min(self.n_steps)
        }
    }
}

/// `dim`-dimensional samples on every node of a [`TimeGrid`], stored node-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: TimeGrid,
    dim: usize,
    values: Vec<f64>,
}

impl GridFunction {
    /// Wraps node-major samples: `values[k * dim + i]` is component `i` at node `k`.
    pub fn new(grid: TimeGrid, dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("grid function dimension must be positive".into()));
        }
        if values.len() != grid.n_nodes() * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} samples ({} nodes x dim {}), got {}",
                grid.n_nodes() * dim,
                grid.n_nodes(),
                dim,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite sample at node {} component {}",
                pos / dim,
                pos % dim
            )));
        }
        Ok(Self { grid, dim, values })
    }

    pub(crate) fn from_raw(grid: TimeGrid, dim: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.n_nodes() * dim);
        Self { grid, dim, values }
    }

    pub fn zeros(grid: TimeGrid, dim: usize) -> Self {
        Self::from_raw(grid, dim, vec![0.0; grid.n_nodes() * dim])
    }

    pub fn constant(grid: TimeGrid, value: &[f64]) -> Result<Self> {
        let values = (0..grid.n_nodes()).flat_map(|_| value.iter().copied()).collect();
        Self::new(grid, value.len(), values)
    }

    /// Samples a scalar function at every node.
    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().map(f).collect();
        Self::new(grid, 1, values)
    }

    /// Samples a vector function at every node.
    pub fn from_vec_fn(grid: TimeGrid, dim: usize, f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.n_nodes() * dim);
        for t in grid.nodes() {
            let v = f(t);
            if v.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "sampled vector has length {} but dim is {dim}",
                    v.len()
                )));
            }
            values.extend(v);
        }
        Self::new(grid, dim, values)
    }

    #[inline]
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.grid.n_nodes()
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn node(&self, k: usize) -> &[f64] {
        &self.values[k * self.dim..(k + 1) * self.dim]
    }

    pub fn node_mut(&mut self, k: usize) -> &mut [f64] {
        &mut self.values[k * self.dim..(k + 1) * self.dim]
    }

    /// Component `i` as a contiguous series over the nodes.
    pub fn component(&self, i: usize) -> Vec<f64> {
        assert!(i < self.dim, "component {i} out of range for dim {}", self.dim);
        self.values.iter().skip(i).step_by(self.dim).copied().collect()
    }

    /// Builds a grid function from per-component series of equal length.
    pub fn from_components(grid: TimeGrid, components: &[Vec<f64>]) -> Result<Self> {
        let dim = components.len();
        if components.iter().any(|c| c.len() != grid.n_nodes()) {
            return Err(Error::InvalidInput("component length does not match grid".into()));
        }
        let mut values = Vec::with_capacity(dim * grid.n_nodes());
        for k in 0..grid.n_nodes() {
            values.extend(components.iter().map(|c| c[k]));
        }
        Self::new(grid, dim, values)
    }

    /// Time reversal `s = t0 + tf - t`: node `k` takes the samples of node `N - k`.
    pub fn reflect(&self) -> Self {
        let mut values = Vec::with_capacity(self.values.len());
        for k in (0..self.n_nodes()).rev() {
            values.extend_from_slice(self.node(k));
        }
        Self::from_raw(self.grid, self.dim, values)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(self.grid, self.dim, self.values.iter().map(|&v| f(v)).collect())
    }

    /// `a * self + b * other`, for linearity checks and relaxation.
    pub fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self::new(self.grid, self.dim, values)
    }

    /// Largest absolute difference over every node and component.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs())))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid || self.dim != other.dim {
            return Err(Error::InvalidInput(format!(
                "grid functions differ in grid or dimension ({} vs {})",
                self.dim, other.dim
            )));
        }
        Ok(())
    }
}
