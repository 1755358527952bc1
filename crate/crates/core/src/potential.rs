use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::UniformGrid;

/// The coefficient `q` of `-y'' + q y = lambda y` on `[0, pi]`.
#[derive(Clone)]
pub enum Potential {
    Constant(f64),
    /// Tabulated values, linearly interpolated between nodes.
    Sampled(SampledPotential),
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            Potential::Sampled(s) => f.debug_tuple("Sampled").field(s).finish(),
            Potential::Function(_) => f.write_str("Function(..)"),
        }
    }
}

impl Potential {
    pub fn zero() -> Self {
        Potential::Constant(0.0)
    }

    pub fn constant(c: f64) -> Self {
        Potential::Constant(c)
    }

    pub fn sampled(xs: Vec<f64>, qs: Vec<f64>) -> Result<Self> {
        SampledPotential::new(xs, qs).map(Potential::Sampled)
    }

    pub fn from_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Potential::Function(Arc::new(f))
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Potential::Constant(c) => *c,
            Potential::Sampled(s) => s.eval(x),
            Potential::Function(f) => f(x),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Potential::Constant(c) => Some(*c),
            _ => None,
        }
    }

    /// `max |q|` over the nodes of `grid` (exact for the sampled and constant cases
    /// when the grid contains the sample abscissae).
    pub fn max_abs(&self, grid: &UniformGrid) -> f64 {
        match self {
            Potential::Constant(c) => c.abs(),
            Potential::Sampled(s) => s.qs.iter().fold(0.0, |m, q| f64::max(m, q.abs())),
            Potential::Function(_) => (0..grid.len())
                .map(|j| self.eval(grid.point(j)).abs())
                .fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledPotential {
    xs: Vec<f64>,
    qs: Vec<f64>,
}

impl SampledPotential {
    pub fn new(xs: Vec<f64>, qs: Vec<f64>) -> Result<Self> {
        if xs.len() != qs.len() || xs.len() < 2 {
            return Err(Error::Argument(format!(
                "potential needs matching abscissae and values (>= 2), got {} and {}",
                xs.len(),
                qs.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Argument(
                "potential abscissae must be strictly increasing".into(),
            ));
        }
        if xs.iter().chain(&qs).any(|v| !v.is_finite()) {
            return Err(Error::Argument("potential samples must be finite".into()));
        }
        Ok(Self { xs, qs })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn qs(&self) -> &[f64] {
        &self.qs
    }

    /// Piecewise-linear interpolant; constant extrapolation outside the table.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.qs[0];
        }
        if x >= self.xs[n - 1] {
            return self.qs[n - 1];
        }
        let k = self.xs.partition_point(|&xi| xi <= x);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let (q0, q1) = (self.qs[k - 1], self.qs[k]);
        q0 + (q1 - q0) * (x - x0) / (x1 - x0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_interpolation() {
        let p = Potential::sampled(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_eq!(p.eval(0.5), 1.0);
        assert_eq!(p.eval(2.0), 1.0);
        assert_eq!(p.eval(1.0), 2.0);
        assert_eq!(p.eval(-1.0), 0.0);
        assert_eq!(p.eval(5.0), 0.0);
    }

    #[test]
    fn rejects_unsorted() {
        assert!(Potential::sampled(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(Potential::sampled(vec![0.0], vec![1.0]).is_err());
    }
}
