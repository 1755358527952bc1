use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of nodes used for the Cauchy integration and the eigenfunction cache.
pub const DEFAULT_GRID_POINTS: usize = 2001;

/// `m` equally spaced abscissae from `a` to `b` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid {
    a: f64,
    b: f64,
    m: usize,
}

impl UniformGrid {
    pub fn new(a: f64, b: f64, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::Argument(format!(
                "grid needs at least 2 points, got {m}"
            )));
        }
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::Argument(format!("invalid grid interval [{a}, {b}]")));
        }
        Ok(Self { a, b, m })
    }

    /// Uniform grid on `[0, pi]`.
    pub fn standard(m: usize) -> Result<Self> {
        Self::new(0.0, PI, m)
    }

    pub fn start(&self) -> f64 {
        self.a
    }

    pub fn end(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn intervals(&self) -> usize {
        self.m - 1
    }

    pub fn step(&self) -> f64 {
        (self.b - self.a) / self.intervals() as f64
    }

    /// The `j`-th node. The last node is `b` exactly.
    pub fn point(&self, j: usize) -> f64 {
        debug_assert!(j < self.m);
        if j + 1 == self.m {
            self.b
        } else {
            self.a + (self.b - self.a) * (j as f64) / (self.intervals() as f64)
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.m).map(|j| self.point(j)).collect()
    }

    /// Index of the node closest to `x`, clamped to the grid.
    pub fn nearest_index(&self, x: f64) -> usize {
        let r = ((x - self.a) / self.step()).round();
        if r <= 0.0 {
            0
        } else {
            (r as usize).min(self.m - 1)
        }
    }

    /// Index `j` of the cell `[x_j, x_{j+1}]` containing `x` and the local
    /// coordinate `u in [0, 1]` within it.
    pub fn locate(&self, x: f64) -> (usize, f64) {
        let s = (x - self.a) / self.step();
        let j = if s <= 0.0 {
            0
        } else {
            (s.floor() as usize).min(self.m - 2)
        };
        (j, s - j as f64)
    }

    /// If every node of `coarse` is a node of `self`, the index stride between them.
    pub fn stride_to(&self, coarse: &UniformGrid) -> Option<usize> {
        let same_span = (self.a - coarse.a).abs() <= 1e-12 * (1.0 + self.a.abs())
            && (self.b - coarse.b).abs() <= 1e-12 * (1.0 + self.b.abs());
        if !same_span || !self.intervals().is_multiple_of(coarse.intervals()) {
            return None;
        }
        Some(self.intervals() / coarse.intervals())
    }
}

/// Values of a scalar function at the nodes of a [`UniformGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionSamples {
    grid: UniformGrid,
    values: Vec<f64>,
}

impl FunctionSamples {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Argument(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Argument(format!("non-finite sample at index {j}")));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `max_j |self_j - other_j|`; the grids must agree.
    pub fn max_abs_diff(&self, other: &FunctionSamples) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::Argument("sample grids differ".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// `max_j |self_j - f(x_j)|`.
    pub fn max_abs_error(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(j, v)| (v - f(self.grid.point(j))).abs())
            .fold(0.0, f64::max)
    }
}
