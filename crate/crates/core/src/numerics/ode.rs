//! Fixed-step integration of `y'' = (q(x) - lambda) y`.
//!
//! Each step applies the fourth-order Magnus propagator built from the two
//! Gauss-Legendre nodes of the step. The 2x2 exponential is evaluated in
//! closed form, so the map is exact for a potential that is constant on the
//! step and stays accurate for large `lambda`, where explicit Runge-Kutta
//! schemes lose the phase.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::UniformGrid;
use crate::potential::Potential;

const GAUSS_OFFSET: f64 = 0.288_675_134_594_812_9; // sqrt(3) / 6
const COMMUTATOR_WEIGHT: f64 = 0.144_337_567_297_406_4; // sqrt(3) / 12

/// Samples of a solution of `-y'' + q y = lambda y` and of its derivative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchySolution {
    pub grid: UniformGrid,
    pub c: Vec<f64>,
    pub cprime: Vec<f64>,
    pub lambda: f64,
}

impl CauchySolution {
    pub fn end(&self) -> (f64, f64) {
        let n = self.c.len() - 1;
        (self.c[n], self.cprime[n])
    }

    /// Cubic Hermite interpolation from the node values and derivatives.
    pub fn value_at(&self, x: f64) -> f64 {
        let (j, u) = self.grid.locate(x);
        let hs = self.grid.step();
        let u2 = u * u;
        let u3 = u2 * u;
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        h00 * self.c[j]
            + h10 * hs * self.cprime[j]
            + h01 * self.c[j + 1]
            + h11 * hs * self.cprime[j + 1]
    }
}

/// Potential values at the two Gauss nodes of every step of a grid.
#[derive(Debug, Clone)]
pub(crate) struct StepTable {
    grid: UniformGrid,
    nodes: Vec<(f64, f64)>,
}

impl StepTable {
    pub(crate) fn new(q: &Potential, grid: UniformGrid) -> Self {
        let hs = grid.step();
        let nodes = (0..grid.intervals())
            .map(|j| {
                let x = grid.point(j);
                (
                    q.eval(x + hs * (0.5 - GAUSS_OFFSET)),
                    q.eval(x + hs * (0.5 + GAUSS_OFFSET)),
                )
            })
            .collect();
        Self { grid, nodes }
    }

    pub(crate) fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    /// Integrates from `x = a` and calls `visit(j, y_j, y'_j)` at every node.
    pub(crate) fn propagate(
        &self,
        lambda: f64,
        y0: f64,
        yp0: f64,
        mut visit: impl FnMut(usize, f64, f64),
    ) -> Result<(f64, f64)> {
        let hs = self.grid.step();
        let (mut y, mut yp) = (y0, yp0);
        visit(0, y, yp);
        for (j, &(q1, q2)) in self.nodes.iter().enumerate() {
            (y, yp) = magnus_step(hs, q1 - lambda, q2 - lambda, y, yp);
            if !(y.is_finite() && yp.is_finite()) {
                return Err(Error::Overflow {
                    index: j + 1,
                    lambda,
                });
            }
            visit(j + 1, y, yp);
        }
        Ok((y, yp))
    }

    pub(crate) fn solve(&self, lambda: f64, y0: f64, yp0: f64) -> Result<CauchySolution> {
        let m = self.grid.len();
        let mut c = Vec::with_capacity(m);
        let mut cprime = Vec::with_capacity(m);
        self.propagate(lambda, y0, yp0, |_, y, yp| {
            c.push(y);
            cprime.push(yp);
        })?;
        Ok(CauchySolution {
            grid: self.grid,
            c,
            cprime,
            lambda,
        })
    }
}

/// `exp(Omega) (y, y')` with `Omega = [[d, hs], [hs * s, -d]]`.
fn magnus_step(hs: f64, s1: f64, s2: f64, y: f64, yp: f64) -> (f64, f64) {
    let s = 0.5 * (s1 + s2);
    let d = COMMUTATOR_WEIGHT * hs * hs * (s1 - s2);
    let kappa = d * d + hs * hs * s;
    let (ch, sh) = cosh_and_sinhc(kappa);
    (
        (ch + sh * d) * y + sh * hs * yp,
        sh * hs * s * y + (ch - sh * d) * yp,
    )
}

/// `(cosh(sqrt(k)), sinh(sqrt(k)) / sqrt(k))` for either sign of `k`.
fn cosh_and_sinhc(k: f64) -> (f64, f64) {
    if k.abs() < 1e-6 {
        (
            1.0 + k * (0.5 + k * (1.0 / 24.0 + k / 720.0)),
            1.0 + k * (1.0 / 6.0 + k * (1.0 / 120.0 + k / 5040.0)),
        )
    } else if k > 0.0 {
        let r = k.sqrt();
        (r.cosh(), r.sinh() / r)
    } else {
        let r = (-k).sqrt();
        (r.cos(), r.sin() / r)
    }
}

/// Solves `-c'' + q c = lambda c`, `c(0) = 1`, `c'(0) = h` on `grid`.
pub fn integrate_cauchy(
    q: &Potential,
    lambda: f64,
    h: f64,
    grid: &UniformGrid,
) -> Result<CauchySolution> {
    integrate_ivp(q, lambda, 1.0, h, grid)
}

/// Same as [`integrate_cauchy`] with arbitrary initial data `y(a) = y0`, `y'(a) = yp0`.
pub fn integrate_ivp(
    q: &Potential,
    lambda: f64,
    y0: f64,
    yp0: f64,
    grid: &UniformGrid,
) -> Result<CauchySolution> {
    if !lambda.is_finite() {
        return Err(Error::Argument(format!(
            "lambda must be finite, got {lambda}"
        )));
    }
    StepTable::new(q, *grid).solve(lambda, y0, yp0)
}
