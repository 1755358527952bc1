//! Spectral data of the Sturm-Liouville problem
//! `-y'' + q(x) y = lambda y`, `y'(0) - h y(0) = y'(pi) + H y(pi) = 0`,
//! and eigenfunction-series evaluation of the kernels of the transmutation
//! operator `T` (kernel `G`) and of its inverse (kernel `H`).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod example;
pub mod io;
pub mod kernels;
pub mod numerics;
pub mod potential;
pub mod spectral;
pub mod transmute;

pub use error::{Error, Result};
pub use potential::{Potential, SampledPotential};
