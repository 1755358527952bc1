//! Numerical primitives: grids, the Cauchy integrator, quadrature, root
//! bracketing and the modified Bessel function `I_1`.

mod bessel;
mod grid;
mod ode;
mod quadrature;
mod roots;
mod trig;

pub use bessel::bessel_i1;
pub use grid::{FunctionSamples, UniformGrid, DEFAULT_GRID_POINTS};
pub(crate) use ode::StepTable;
pub use ode::{integrate_cauchy, integrate_ivp, CauchySolution};
pub use quadrature::{cumulative_integral, prefix_integral, simpson};
pub use roots::find_root_bracketed;
pub use trig::{cos_sqrt, sin_sqrt_over_sqrt};
