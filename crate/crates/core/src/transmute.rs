//! The transmutation operator `T[u](x) = u(x) + int_0^x G(x, s) u(s) ds`, its
//! inverse with kernel `H`, and residual checks of the relations tying `F`, `G`
//! and `H` together.
//!
//! All integrals are taken on grid nodes; an abscissa `x` given by the caller
//! is snapped to the nearest node.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{
    kernel_partial_sum, EigenfunctionProvider, KernelEvaluator, KernelGrid, KernelKind, PointKernel,
};
use crate::numerics::{cos_sqrt, cumulative_integral, prefix_integral, UniformGrid};
use crate::potential::Potential;
use crate::spectral::{unperturbed_alpha, SpectralData};

pub use crate::numerics::FunctionSamples;

/// Index stride from the kernel grid to the sample grid.
fn kernel_stride(kernel: &KernelGrid, u: &FunctionSamples) -> Result<usize> {
    kernel.grid().stride_to(u.grid()).ok_or_else(|| {
        Error::Argument(format!(
            "kernel grid of {} points does not contain the {}-point sample grid",
            kernel.m(),
            u.grid().len()
        ))
    })
}

fn volterra(kernel: &KernelGrid, u: &FunctionSamples) -> Result<FunctionSamples> {
    let stride = kernel_stride(kernel, u)?;
    let step = u.grid().step();
    let uv = u.values();
    let values: Vec<f64> = (0..uv.len())
        .into_par_iter()
        .map(|i| {
            let integrand: Vec<f64> = (0..=i)
                .map(|k| kernel.get(stride * i, stride * k) * uv[k])
                .collect();
            uv[i] + prefix_integral(step, &integrand)
        })
        .collect();
    FunctionSamples::new(*u.grid(), values)
}

/// `T[u]` with a direct kernel grid (`G` or `Gexact`).
pub fn apply_t(g: &KernelGrid, u: &FunctionSamples) -> Result<FunctionSamples> {
    if !matches!(g.kind(), KernelKind::G | KernelKind::Gexact) {
        return Err(Error::Argument(format!(
            "T needs a G kernel, got {}",
            g.kind()
        )));
    }
    volterra(g, u)
}

/// `T^{-1}[u]` with an inverse kernel grid (`H`).
pub fn apply_tinv(h: &KernelGrid, u: &FunctionSamples) -> Result<FunctionSamples> {
    if h.kind() != KernelKind::H {
        return Err(Error::Argument(format!(
            "T^-1 needs an H kernel, got {}",
            h.kind()
        )));
    }
    volterra(h, u)
}

/// `T^{-1}[f]` by the eigenfunction series truncated at `order`:
/// `f(x) + sum_n (cos(rho_n x) / alpha_n int_0^x c(rho_n, t) f(t) dt
///              - cos(n x) / alpha_n^0 int_0^x c(n, t) f(t) dt)`.
pub fn preimage_series(
    spec: &SpectralData,
    efs: &dyn EigenfunctionProvider,
    f: &FunctionSamples,
    order: usize,
) -> Result<FunctionSamples> {
    spec.require(order)?;
    if order > efs.n_max() {
        return Err(Error::Argument(format!(
            "order {order} exceeds the {} cached eigenfunctions",
            efs.n_max() + 1
        )));
    }
    let grid = *f.grid();
    let xs = grid.points();
    let fv = f.values();
    let terms: Vec<Vec<f64>> = (0..=order)
        .into_par_iter()
        .map(|n| {
            let weighted = |c: &dyn Fn(f64) -> f64| -> Vec<f64> {
                let prod: Vec<f64> = xs.iter().zip(fv).map(|(&x, &v)| c(x) * v).collect();
                cumulative_integral(grid.step(), &prod)
            };
            let inner_rho = weighted(&|x| efs.perturbed(n, x));
            let inner_n = weighted(&|x| efs.unperturbed(n, x));
            let (lambda, alpha, alpha0) = (spec.lambda(n), spec.alpha(n), unperturbed_alpha(n));
            xs.iter()
                .enumerate()
                .map(|(j, &x)| {
                    cos_sqrt(lambda, x) / alpha * inner_rho[j]
                        - (n as f64 * x).cos() / alpha0 * inner_n[j]
                })
                .collect()
        })
        .collect();
    let mut values = fv.to_vec();
    for term in &terms {
        for (v, t) in values.iter_mut().zip(term) {
            *v += t;
        }
    }
    FunctionSamples::new(grid, values)
}

fn row_index(grid: &UniformGrid, x: f64) -> Result<usize> {
    if !(x > 0.0 && x <= grid.end() + 1e-12) {
        return Err(Error::Domain(format!(
            "residual abscissa must lie in (0, pi], got {x}"
        )));
    }
    let i = grid.nearest_index(x);
    if i == 0 {
        return Err(Error::Domain(format!(
            "x = {x} snaps to the origin of the grid"
        )));
    }
    Ok(i)
}

/// `max_{t_j < x} |G(x, t) + F(x, t) + int_0^x F(t, s) G(x, s) ds|` on the row
/// of `g` nearest to `x`.
pub fn gl_residual(f: &dyn PointKernel, g: &KernelGrid, x: f64) -> Result<f64> {
    let grid = *g.grid();
    let i = row_index(&grid, x)?;
    let xi = grid.point(i);
    let row = g.row(i);
    let worst = (0..i)
        .into_par_iter()
        .map(|j| {
            let tj = grid.point(j);
            let integrand: Vec<f64> = (0..=i)
                .map(|k| f.value(tj, grid.point(k)) * row[k])
                .collect();
            (row[j] + f.value(xi, tj) + prefix_integral(grid.step(), &integrand)).abs()
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// `max_{t_j < x} |H(x, t) - F(x, t) - int_0^t F(x, s) G(t, s) ds|` on the row
/// nearest to `x`.
pub fn h_consistency_residual(
    f: &dyn PointKernel,
    g: &KernelGrid,
    h: &KernelGrid,
    x: f64,
) -> Result<f64> {
    if g.grid() != h.grid() {
        return Err(Error::Argument("G and H grids differ".into()));
    }
    let grid = *g.grid();
    let i = row_index(&grid, x)?;
    let xi = grid.point(i);
    let worst = (0..i)
        .into_par_iter()
        .map(|j| {
            let grow = g.row(j);
            let integrand: Vec<f64> = (0..=j)
                .map(|k| f.value(xi, grid.point(k)) * grow[k])
                .collect();
            (h.get(i, j) - f.value(xi, grid.point(j)) - prefix_integral(grid.step(), &integrand))
                .abs()
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// `max_x |sign K(x, x) - h - (1/2) int_0^x q|`; `sign` is `+1` for `G`, `-1` for `H`.
pub fn diagonal_residual(kernel: &KernelGrid, q: &Potential, h: f64, sign: f64) -> Result<f64> {
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::Argument(format!(
            "sign must be +1 or -1, got {sign}"
        )));
    }
    let grid = kernel.grid();
    let qv: Vec<f64> = grid.points().into_iter().map(|x| q.eval(x)).collect();
    let integral = cumulative_integral(grid.step(), &qv);
    Ok(kernel
        .diagonal()
        .iter()
        .zip(&integral)
        .map(|(k, iq)| (sign * k - h - 0.5 * iq).abs())
        .fold(0.0, f64::max))
}

/// Both sides of the distributional limit at one `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    /// `int_0^pi f(t) I_N(x, t) dt`.
    pub lhs: f64,
    /// `int_0^pi f(t) (G(x, t) - H(t, x)) dt`, kernels extended by zero off the triangle.
    pub rhs: f64,
}

/// Pairs `f` with the plain partial sum `I_N(x, .)` and with the reference
/// kernels `g_ref`, `h_ref`. `x` is snapped to the grid of `f`.
pub fn weak_pairing(
    spec: &SpectralData,
    efs: &dyn EigenfunctionProvider,
    f: &FunctionSamples,
    x: f64,
    order: usize,
    g_ref: &dyn KernelEvaluator,
    h_ref: &dyn KernelEvaluator,
) -> Result<Pairing> {
    let grid = *f.grid();
    if !(x >= grid.start() - 1e-12 && x <= grid.end() + 1e-12) {
        return Err(Error::Domain(format!("x = {x} is outside the sample grid")));
    }
    let i = grid.nearest_index(x);
    let xi = grid.point(i);
    let fv = f.values();
    let lhs_integrand = (0..grid.len())
        .into_par_iter()
        .map(|j| Ok(fv[j] * kernel_partial_sum(spec, efs, xi, grid.point(j), order)?))
        .collect::<Result<Vec<f64>>>()?;
    let rhs_integrand = (0..grid.len())
        .into_par_iter()
        .map(|j| {
            let t = grid.point(j);
            let k = if j <= i {
                g_ref.eval(xi, t)?
            } else {
                -h_ref.eval(t, xi)?
            };
            Ok(fv[j] * k)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Pairing {
        lhs: prefix_integral(grid.step(), &lhs_integrand),
        rhs: prefix_integral(grid.step(), &rhs_integrand),
    })
}
