//! Partial sums of the eigenfunction series for `F`, `a`, `G` and `H`.
//!
//! In [`SeriesMode::Plain`] the sums are the raw partial sums; they converge
//! slowly and jump by `omega` at `x = t = pi`. [`SeriesMode::Accelerated`]
//! subtracts the `omega`-proportional sawtooth tail from every term and adds
//! back its closed-form sum, which makes the series absolutely and uniformly
//! convergent on the whole triangle.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::numerics::{bessel_i1, cos_sqrt, sin_sqrt_over_sqrt, CauchySolution, UniformGrid};
use crate::spectral::{unperturbed_alpha, Problem, SpectralData};

const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesMode {
    Plain,
    Accelerated,
}

impl FromStr for SeriesMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(SeriesMode::Plain),
            "accelerated" => Ok(SeriesMode::Accelerated),
            _ => Err(Error::Parse(format!(
                "unknown series mode '{s}' (plain|accelerated)"
            ))),
        }
    }
}

impl fmt::Display for SeriesMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesMode::Plain => "plain",
            SeriesMode::Accelerated => "accelerated",
        })
    }
}

/// Truncation order `N` (terms `n = 0..=N`) and summation mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesConfig {
    pub order: usize,
    pub mode: SeriesMode,
}

impl SeriesConfig {
    pub fn plain(order: usize) -> Self {
        Self {
            order,
            mode: SeriesMode::Plain,
        }
    }

    pub fn accelerated(order: usize) -> Self {
        Self {
            order,
            mode: SeriesMode::Accelerated,
        }
    }

    fn is_accelerated(&self) -> bool {
        self.mode == SeriesMode::Accelerated
    }
}

/// Source of `c(rho_n, x)` and `c(n, x)` (the Cauchy solution at `lambda = n^2`).
pub trait EigenfunctionProvider: Sync {
    fn n_max(&self) -> usize;
    fn perturbed(&self, n: usize, x: f64) -> f64;
    fn unperturbed(&self, n: usize, x: f64) -> f64;
}

/// Cauchy solutions for `n = 0..=n_max` integrated once on the problem grid and
/// read back by Hermite interpolation. Built completely before any lookup.
#[derive(Debug, Clone)]
pub struct EigenfunctionCache {
    perturbed: Vec<CauchySolution>,
    unperturbed: Vec<CauchySolution>,
}

impl EigenfunctionCache {
    pub fn build(problem: &Problem, spec: &SpectralData, n_max: usize) -> Result<Self> {
        spec.require(n_max)?;
        let perturbed = (0..=n_max)
            .into_par_iter()
            .map(|n| problem.solve(spec.lambda(n)))
            .collect::<Result<Vec<_>>>()?;
        let unperturbed = (0..=n_max)
            .into_par_iter()
            .map(|n| problem.solve((n * n) as f64))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            perturbed,
            unperturbed,
        })
    }

    pub fn perturbed_solution(&self, n: usize) -> &CauchySolution {
        &self.perturbed[n]
    }

    pub fn unperturbed_solution(&self, n: usize) -> &CauchySolution {
        &self.unperturbed[n]
    }
}

impl EigenfunctionProvider for EigenfunctionCache {
    fn n_max(&self) -> usize {
        self.perturbed.len() - 1
    }

    fn perturbed(&self, n: usize, x: f64) -> f64 {
        self.perturbed[n].value_at(x)
    }

    fn unperturbed(&self, n: usize, x: f64) -> f64 {
        self.unperturbed[n].value_at(x)
    }
}

/// Closed-form Cauchy solutions for a constant potential `q`:
/// `c(rho, x) = cos(mu x) + h sin(mu x) / mu` with `mu^2 = rho^2 - q`.
#[derive(Debug, Clone)]
pub struct ConstantPotentialEigenfunctions {
    q: f64,
    h: f64,
    lambdas: Vec<f64>,
}

impl ConstantPotentialEigenfunctions {
    pub fn new(q: f64, h: f64, spec: &SpectralData) -> Self {
        Self {
            q,
            h,
            lambdas: spec.lambdas(),
        }
    }

    fn c(&self, lambda: f64, x: f64) -> f64 {
        let shifted = lambda - self.q;
        cos_sqrt(shifted, x) + self.h * sin_sqrt_over_sqrt(shifted, x)
    }
}

impl EigenfunctionProvider for ConstantPotentialEigenfunctions {
    fn n_max(&self) -> usize {
        self.lambdas.len() - 1
    }

    fn perturbed(&self, n: usize, x: f64) -> f64 {
        self.c(self.lambdas[n], x)
    }

    fn unperturbed(&self, n: usize, x: f64) -> f64 {
        self.c((n * n) as f64, x)
    }
}

/// Everything the series need at one abscissa, for `n = 0..=N`.
struct ModeValues {
    x: f64,
    cos_rho: Vec<f64>,
    cos_n: Vec<f64>,
    sin_n: Vec<f64>,
    c_rho: Vec<f64>,
    c_n: Vec<f64>,
}

impl ModeValues {
    fn new(
        spec: &SpectralData,
        efs: Option<&dyn EigenfunctionProvider>,
        x: f64,
        order: usize,
    ) -> Self {
        let modes = 0..=order;
        let cos_rho = modes.clone().map(|n| cos_sqrt(spec.lambda(n), x)).collect();
        let cos_n = modes.clone().map(|n| (n as f64 * x).cos()).collect();
        let sin_n = modes.clone().map(|n| (n as f64 * x).sin()).collect();
        let (c_rho, c_n) = match efs {
            Some(p) => (
                modes.clone().map(|n| p.perturbed(n, x)).collect(),
                modes.map(|n| p.unperturbed(n, x)).collect(),
            ),
            None => (Vec::new(), Vec::new()),
        };
        Self {
            x,
            cos_rho,
            cos_n,
            sin_n,
            c_rho,
            c_n,
        }
    }

    fn order(&self) -> usize {
        self.cos_n.len() - 1
    }
}

/// `x sin(nx) cos(nt) + t sin(nt) cos(nx)`, the coefficient of the sawtooth tail.
fn sawtooth(vx: &ModeValues, vt: &ModeValues, n: usize) -> f64 {
    vx.x * vx.sin_n[n] * vt.cos_n[n] + vt.x * vt.sin_n[n] * vx.cos_n[n]
}

fn tail_weight(omega: f64, n: usize) -> f64 {
    2.0 * omega / (PI * PI * n as f64)
}

fn f_combine(spec: &SpectralData, accelerated: bool, vx: &ModeValues, vt: &ModeValues) -> f64 {
    let mut acc = 0.0;
    for n in 0..=vx.order() {
        let mut term = vx.cos_rho[n] * vt.cos_rho[n] / spec.alpha(n)
            - vx.cos_n[n] * vt.cos_n[n] / unperturbed_alpha(n);
        if accelerated && n > 0 {
            term += tail_weight(spec.omega, n) * sawtooth(vx, vt, n);
        }
        acc += term;
    }
    if accelerated {
        let (x, t) = (vx.x, vt.x);
        acc -= spec.omega / (PI * PI) * (PI * x.max(t) - x * x - t * t);
    }
    acc
}

fn a_combine(spec: &SpectralData, accelerated: bool, vx: &ModeValues) -> f64 {
    let mut acc = 0.0;
    for n in 0..=vx.order() {
        let mut term = vx.cos_rho[n] / spec.alpha(n) - vx.cos_n[n] / unperturbed_alpha(n);
        if accelerated && n > 0 {
            term += tail_weight(spec.omega, n) * vx.x * vx.sin_n[n];
        }
        acc += term;
    }
    if accelerated {
        let ax = vx.x.abs();
        acc -= spec.omega * ax * (PI - ax) / (PI * PI);
    }
    acc
}

/// `vx` must carry eigenfunction values.
fn g_combine(spec: &SpectralData, accelerated: bool, vx: &ModeValues, vt: &ModeValues) -> f64 {
    let mut acc = 0.0;
    for n in 0..=vx.order() {
        let mut term = vx.c_n[n] * vt.cos_n[n] / unperturbed_alpha(n)
            - vx.c_rho[n] * vt.cos_rho[n] / spec.alpha(n);
        if accelerated && n > 0 {
            term -= tail_weight(spec.omega, n) * sawtooth(vx, vt, n);
        }
        acc += term;
    }
    if accelerated {
        let (x, t) = (vx.x, vt.x);
        acc += spec.omega / (PI * PI) * (PI * x - x * x - t * t);
    }
    acc
}

/// `vt` must carry eigenfunction values.
fn h_combine(spec: &SpectralData, accelerated: bool, vx: &ModeValues, vt: &ModeValues) -> f64 {
    let mut acc = 0.0;
    for n in 0..=vx.order() {
        let mut term = vx.cos_rho[n] * vt.c_rho[n] / spec.alpha(n)
            - vx.cos_n[n] * vt.c_n[n] / unperturbed_alpha(n);
        if accelerated && n > 0 {
            term += tail_weight(spec.omega, n) * sawtooth(vx, vt, n);
        }
        acc += term;
    }
    if accelerated {
        let (x, t) = (vx.x, vt.x);
        acc -= spec.omega / (PI * PI) * (PI * x - x * x - t * t);
    }
    acc
}

fn check_square(x: f64, t: f64) -> Result<()> {
    let inside = |v: f64| (-DOMAIN_SLACK..=PI + DOMAIN_SLACK).contains(&v);
    if inside(x) && inside(t) {
        Ok(())
    } else {
        Err(Error::Domain(format!("({x}, {t}) is outside [0, pi]^2")))
    }
}

pub(crate) fn check_triangle(x: f64, t: f64) -> Result<()> {
    check_square(x, t)?;
    if t > x + DOMAIN_SLACK || t < -DOMAIN_SLACK {
        return Err(Error::Domain(format!(
            "need 0 <= t <= x, got x = {x}, t = {t}"
        )));
    }
    Ok(())
}

fn check_provider(efs: &dyn EigenfunctionProvider, order: usize) -> Result<()> {
    if order > efs.n_max() {
        return Err(Error::Argument(format!(
            "series order {order} exceeds the {} cached eigenfunctions",
            efs.n_max() + 1
        )));
    }
    Ok(())
}

/// Partial sum of the Gel'fand-Levitan input kernel `F(x, t)` on `[0, pi]^2`.
pub fn f_partial(spec: &SpectralData, x: f64, t: f64, cfg: SeriesConfig) -> Result<f64> {
    check_square(x, t)?;
    spec.require(cfg.order)?;
    let vx = ModeValues::new(spec, None, x, cfg.order);
    let vt = ModeValues::new(spec, None, t, cfg.order);
    Ok(f_combine(spec, cfg.is_accelerated(), &vx, &vt))
}

/// Partial sum of `a(x)`, with `F(x, t) = (a(x + t) + a(x - t)) / 2`; `x in [-pi, 2 pi]`.
pub fn a_function(spec: &SpectralData, x: f64, cfg: SeriesConfig) -> Result<f64> {
    if !(-PI - DOMAIN_SLACK..=2.0 * PI + DOMAIN_SLACK).contains(&x) {
        return Err(Error::Domain(format!(
            "a(x) is defined for x in [-pi, 2 pi], got {x}"
        )));
    }
    spec.require(cfg.order)?;
    let vx = ModeValues::new(spec, None, x, cfg.order);
    Ok(a_combine(spec, cfg.is_accelerated(), &vx))
}

/// Partial sum for the direct kernel `G(x, t)`, `0 <= t <= x <= pi`.
pub fn g_eval(
    spec: &SpectralData,
    efs: &dyn EigenfunctionProvider,
    x: f64,
    t: f64,
    cfg: SeriesConfig,
) -> Result<f64> {
    check_triangle(x, t)?;
    spec.require(cfg.order)?;
    check_provider(efs, cfg.order)?;
    let vx = ModeValues::new(spec, Some(efs), x, cfg.order);
    let vt = ModeValues::new(spec, None, t.min(x), cfg.order);
    Ok(g_combine(spec, cfg.is_accelerated(), &vx, &vt))
}

/// Partial sum for the inverse kernel `H(x, t)`, `0 <= t <= x <= pi`.
pub fn h_eval(
    spec: &SpectralData,
    efs: &dyn EigenfunctionProvider,
    x: f64,
    t: f64,
    cfg: SeriesConfig,
) -> Result<f64> {
    check_triangle(x, t)?;
    spec.require(cfg.order)?;
    check_provider(efs, cfg.order)?;
    let vx = ModeValues::new(spec, None, x, cfg.order);
    let vt = ModeValues::new(spec, Some(efs), t.min(x), cfg.order);
    Ok(h_combine(spec, cfg.is_accelerated(), &vx, &vt))
}

/// The plain partial sum `I_N(x, t)` of the `G` series at any point of the
/// square. Off the triangle it approximates `-H(t, x)`.
pub fn kernel_partial_sum(
    spec: &SpectralData,
    efs: &dyn EigenfunctionProvider,
    x: f64,
    t: f64,
    order: usize,
) -> Result<f64> {
    check_square(x, t)?;
    spec.require(order)?;
    check_provider(efs, order)?;
    let vx = ModeValues::new(spec, Some(efs), x, order);
    let vt = ModeValues::new(spec, None, t, order);
    Ok(g_combine(spec, false, &vx, &vt))
}

/// Direct kernel for `q = 1`, `h = 0`: `x I_1(s) / s` with `s = sqrt(x^2 - t^2)`,
/// and `x / 2` on the diagonal.
pub fn exact_g_const1(x: f64, t: f64) -> Result<f64> {
    check_triangle(x, t)?;
    let t = t.min(x).max(0.0);
    let s2 = (x - t) * (x + t);
    if s2 < 1e-12 {
        return Ok(0.5 * x * (1.0 + s2 / 8.0));
    }
    let s = s2.sqrt();
    Ok(x * bessel_i1(s)? / s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelKind {
    F,
    G,
    H,
    Gexact,
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "F" => Ok(KernelKind::F),
            "G" => Ok(KernelKind::G),
            "H" => Ok(KernelKind::H),
            "Gexact" => Ok(KernelKind::Gexact),
            _ => Err(Error::Parse(format!("unknown kernel '{s}' (F|G|H|Gexact)"))),
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Kernel samples on the closed triangle `0 <= t_j <= x_i <= pi` of an `m x m`
/// uniform grid. Row `i` holds `t_0..=t_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelGrid {
    kind: KernelKind,
    grid: UniformGrid,
    values: Vec<f64>,
}

fn row_start(i: usize) -> usize {
    i * (i + 1) / 2
}

impl KernelGrid {
    pub fn new(kind: KernelKind, grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        let expected = row_start(grid.len());
        if values.len() != expected {
            return Err(Error::Argument(format!(
                "triangle of {} points needs {expected} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Argument(format!(
                "non-finite kernel value at slot {k}"
            )));
        }
        Ok(Self { kind, grid, values })
    }

    pub fn zeros(kind: KernelKind, m: usize) -> Result<Self> {
        let grid = UniformGrid::standard(m)?;
        Self::new(kind, grid, vec![0.0; row_start(m)])
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn m(&self) -> usize {
        self.grid.len()
    }

    /// `K(x_i, t_j)` for `j <= i`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(j <= i, "kernel grid holds t <= x only (i = {i}, j = {j})");
        self.values[row_start(i) + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[row_start(i)..row_start(i + 1)]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.m()).map(|i| self.get(i, i)).collect()
    }

    pub fn max_abs_diff(&self, other: &KernelGrid) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::Argument("kernel grids differ".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// CSV with header `x,t,value`, rows in triangle order.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,t,value")?;
        for i in 0..self.m() {
            let x = fmt_f64(self.grid.point(i));
            for (j, v) in self.row(i).iter().enumerate() {
                writeln!(w, "{x},{},{}", fmt_f64(self.grid.point(j)), fmt_f64(*v))?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Kernel samples on the full square `[0, pi]^2`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareGrid {
    grid: UniformGrid,
    values: Vec<f64>,
}

impl SquareGrid {
    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.len() + j]
    }

    fn node(&self, x: f64) -> Option<usize> {
        let i = self.grid.nearest_index(x);
        ((x - self.grid.point(i)).abs() <= 1e-9 * self.grid.step()).then_some(i)
    }
}

/// A kernel that can be read at arbitrary points of `[0, pi]^2`.
pub trait PointKernel: Sync {
    fn value(&self, x: f64, t: f64) -> f64;
}

impl<F: Fn(f64, f64) -> f64 + Sync> PointKernel for F {
    fn value(&self, x: f64, t: f64) -> f64 {
        self(x, t)
    }
}

impl PointKernel for SquareGrid {
    /// Node values are returned exactly; other points are interpolated bilinearly.
    fn value(&self, x: f64, t: f64) -> f64 {
        if let (Some(i), Some(j)) = (self.node(x), self.node(t)) {
            return self.get(i, j);
        }
        let (i, u) = self.grid.locate(x);
        let (j, v) = self.grid.locate(t);
        (1.0 - u) * ((1.0 - v) * self.get(i, j) + v * self.get(i, j + 1))
            + u * ((1.0 - v) * self.get(i + 1, j) + v * self.get(i + 1, j + 1))
    }
}

/// A kernel on the triangle `0 <= t <= x <= pi`.
pub trait KernelEvaluator: Sync {
    fn kind(&self) -> KernelKind;

    fn eval(&self, x: f64, t: f64) -> Result<f64>;

    /// Values at every triangle node of `grid`, in [`KernelGrid`] order.
    fn eval_triangle(&self, grid: &UniformGrid) -> Result<Vec<f64>> {
        let rows = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let x = grid.point(i);
                (0..=i)
                    .map(|j| self.eval(x, grid.point(j)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(rows.concat())
    }
}

/// `exact_g_const1` as a [`KernelEvaluator`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactConstOneKernel;

impl KernelEvaluator for ExactConstOneKernel {
    fn kind(&self) -> KernelKind {
        KernelKind::Gexact
    }

    fn eval(&self, x: f64, t: f64) -> Result<f64> {
        exact_g_const1(x, t)
    }
}

/// One of the series kernels `F`, `G`, `H` at a fixed [`SeriesConfig`].
#[derive(Clone, Copy)]
pub struct SeriesKernel<'a> {
    kind: KernelKind,
    spec: &'a SpectralData,
    efs: Option<&'a dyn EigenfunctionProvider>,
    cfg: SeriesConfig,
}

impl<'a> SeriesKernel<'a> {
    pub fn f(spec: &'a SpectralData, cfg: SeriesConfig) -> Result<Self> {
        spec.require(cfg.order)?;
        Ok(Self {
            kind: KernelKind::F,
            spec,
            efs: None,
            cfg,
        })
    }

    pub fn g(
        spec: &'a SpectralData,
        efs: &'a dyn EigenfunctionProvider,
        cfg: SeriesConfig,
    ) -> Result<Self> {
        Self::with_eigenfunctions(KernelKind::G, spec, efs, cfg)
    }

    pub fn h(
        spec: &'a SpectralData,
        efs: &'a dyn EigenfunctionProvider,
        cfg: SeriesConfig,
    ) -> Result<Self> {
        Self::with_eigenfunctions(KernelKind::H, spec, efs, cfg)
    }

    fn with_eigenfunctions(
        kind: KernelKind,
        spec: &'a SpectralData,
        efs: &'a dyn EigenfunctionProvider,
        cfg: SeriesConfig,
    ) -> Result<Self> {
        spec.require(cfg.order)?;
        check_provider(efs, cfg.order)?;
        Ok(Self {
            kind,
            spec,
            efs: Some(efs),
            cfg,
        })
    }

    pub fn config(&self) -> SeriesConfig {
        self.cfg
    }

    fn values_at(&self, x: f64) -> ModeValues {
        ModeValues::new(self.spec, self.efs, x, self.cfg.order)
    }

    fn combine(&self, vx: &ModeValues, vt: &ModeValues) -> f64 {
        let acc = self.cfg.is_accelerated();
        match self.kind {
            KernelKind::F => f_combine(self.spec, acc, vx, vt),
            KernelKind::G => g_combine(self.spec, acc, vx, vt),
            KernelKind::H => h_combine(self.spec, acc, vx, vt),
            KernelKind::Gexact => unreachable!("series kernels are F, G or H"),
        }
    }

    /// Values on the whole square; used for `F`, whose arguments range over
    /// `[0, pi]^2` in the integral equations.
    pub fn square_grid(&self, m: usize) -> Result<SquareGrid> {
        let grid = UniformGrid::standard(m)?;
        let nodes: Vec<ModeValues> = (0..m)
            .into_par_iter()
            .map(|i| self.values_at(grid.point(i)))
            .collect();
        let rows: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|i| (0..m).map(|j| self.combine(&nodes[i], &nodes[j])).collect())
            .collect();
        Ok(SquareGrid {
            grid,
            values: rows.concat(),
        })
    }
}

impl KernelEvaluator for SeriesKernel<'_> {
    fn kind(&self) -> KernelKind {
        self.kind
    }

    fn eval(&self, x: f64, t: f64) -> Result<f64> {
        if self.kind == KernelKind::F {
            check_square(x, t)?;
        } else {
            check_triangle(x, t)?;
        }
        let t = if self.kind == KernelKind::F {
            t
        } else {
            t.min(x)
        };
        Ok(self.combine(&self.values_at(x), &self.values_at(t)))
    }

    fn eval_triangle(&self, grid: &UniformGrid) -> Result<Vec<f64>> {
        let nodes: Vec<ModeValues> = (0..grid.len())
            .into_par_iter()
            .map(|i| self.values_at(grid.point(i)))
            .collect();
        let rows: Vec<Vec<f64>> = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                (0..=i)
                    .map(|j| self.combine(&nodes[i], &nodes[j]))
                    .collect()
            })
            .collect();
        Ok(rows.concat())
    }
}

/// Evaluates `evaluator` at every triangle node of the `m`-point grid on `[0, pi]`.
pub fn build_kernel_grid(evaluator: &dyn KernelEvaluator, m: usize) -> Result<KernelGrid> {
    let grid = UniformGrid::standard(m)?;
    let values = evaluator.eval_triangle(&grid)?;
    KernelGrid::new(evaluator.kind(), grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Potential;
    use crate::spectral::compute_spectrum;

    fn closed_const_one(order: usize) -> SpectralData {
        let lambdas: Vec<f64> = (0..=order).map(|n| (n * n + 1) as f64).collect();
        let alphas: Vec<f64> = (0..=order).map(unperturbed_alpha).collect();
        SpectralData::from_parts(PI / 2.0, &lambdas, &alphas).unwrap()
    }

    fn zero_problem() -> (Problem, SpectralData) {
        let p = Problem::new(Potential::zero(), 0.0, 0.0).unwrap();
        let s = compute_spectrum(&p, 12).unwrap();
        (p, s)
    }

    #[test]
    fn zero_potential_kernels_vanish() {
        let (p, s) = zero_problem();
        let efs = EigenfunctionCache::build(&p, &s, 12).unwrap();
        for cfg in [SeriesConfig::plain(12), SeriesConfig::accelerated(12)] {
            for (x, t) in [(0.3, 0.1), (PI, PI), (2.0, 0.0), (1.0, 1.0)] {
                assert!(f_partial(&s, x, t, cfg).unwrap().abs() < 1e-9);
                assert!(g_eval(&s, &efs, x, t, cfg).unwrap().abs() < 1e-9);
                assert!(h_eval(&s, &efs, x, t, cfg).unwrap().abs() < 1e-9);
                assert!(a_function(&s, x + t, cfg).unwrap().abs() < 1e-9);
            }
        }
    }

    #[test]
    fn f_at_origin_for_unit_potential() {
        let s = closed_const_one(30);
        for order in [0, 5, 30] {
            assert_eq!(
                f_partial(&s, 0.0, 0.0, SeriesConfig::plain(order)).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn domain_and_order_errors() {
        let s = closed_const_one(5);
        let efs = ConstantPotentialEigenfunctions::new(1.0, 0.0, &s);
        assert!(matches!(
            g_eval(&s, &efs, 1.0, 2.0, SeriesConfig::plain(3)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            h_eval(&s, &efs, 1.0, 1.5, SeriesConfig::plain(3)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            f_partial(&s, 1.0, 0.5, SeriesConfig::plain(6)),
            Err(Error::Argument(_))
        ));
        assert!(a_function(&s, 7.0, SeriesConfig::plain(3)).is_err());
        assert!(matches!(exact_g_const1(0.5, 0.6), Err(Error::Domain(_))));
    }

    #[test]
    fn exact_kernel_values() {
        assert_eq!(exact_g_const1(0.0, 0.0).unwrap(), 0.0);
        assert!((exact_g_const1(PI, PI).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((exact_g_const1(1.0, 0.0).unwrap() - 0.565_159_1).abs() < 1e-7);
        // the near-diagonal branch agrees with the Bessel form
        let (x, t): (f64, f64) = (2.0, 2.0 - 1e-14);
        let s = ((x - t) * (x + t)).sqrt();
        let direct = x * bessel_i1(s).unwrap() / s;
        assert!((exact_g_const1(x, t).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn f_is_symmetric_and_matches_a() {
        let s = closed_const_one(40);
        for cfg in [SeriesConfig::plain(40), SeriesConfig::accelerated(40)] {
            for (x, t) in [(0.4, 1.9), (2.5, 0.3), (PI, 1.0), (3.0, 3.0)] {
                let f1 = f_partial(&s, x, t, cfg).unwrap();
                let f2 = f_partial(&s, t, x, cfg).unwrap();
                assert_eq!(f1, f2);
                let via_a = 0.5
                    * (a_function(&s, x + t, cfg).unwrap() + a_function(&s, x - t, cfg).unwrap());
                assert!((f1 - via_a).abs() < 1e-12, "{x},{t}: {f1} vs {via_a}");
            }
        }
    }

    #[test]
    fn a_jump_at_two_pi() {
        let s = closed_const_one(200);
        let plain = a_function(&s, 2.0 * PI, SeriesConfig::plain(200)).unwrap();
        let acc = a_function(&s, 2.0 * PI, SeriesConfig::accelerated(200)).unwrap();
        assert!((acc - plain - 2.0 * s.omega).abs() < 1e-9);
        // the accelerated value is the continuous extension
        let near = a_function(&s, 2.0 * PI - 1e-3, SeriesConfig::accelerated(200)).unwrap();
        assert!((acc - near).abs() < 0.05, "{acc} vs {near}");
    }

    #[test]
    fn grid_evaluation_matches_pointwise() {
        let s = closed_const_one(15);
        let efs = ConstantPotentialEigenfunctions::new(1.0, 0.0, &s);
        let cfg = SeriesConfig::accelerated(15);
        let g = SeriesKernel::g(&s, &efs, cfg).unwrap();
        let h = SeriesKernel::h(&s, &efs, cfg).unwrap();
        let gg = build_kernel_grid(&g, 9).unwrap();
        let hg = build_kernel_grid(&h, 9).unwrap();
        let grid = *gg.grid();
        for i in 0..9 {
            for j in 0..=i {
                let (x, t) = (grid.point(i), grid.point(j));
                assert_eq!(gg.get(i, j), g_eval(&s, &efs, x, t, cfg).unwrap());
                assert_eq!(hg.get(i, j), h_eval(&s, &efs, x, t, cfg).unwrap());
            }
        }
        let f = SeriesKernel::f(&s, cfg).unwrap();
        let sq = f.square_grid(9).unwrap();
        assert_eq!(
            sq.value(grid.point(2), grid.point(7)),
            f_partial(&s, grid.point(2), grid.point(7), cfg).unwrap()
        );
    }

    #[test]
    fn small_grids() {
        let (p, s) = zero_problem();
        let efs = EigenfunctionCache::build(&p, &s, 4).unwrap();
        let g = SeriesKernel::g(&s, &efs, SeriesConfig::plain(4)).unwrap();
        let kg = build_kernel_grid(&g, 3).unwrap();
        assert_eq!(kg.values().len(), 6);
        assert!(kg.values().iter().all(|v| v.abs() < 1e-9));

        let exact = build_kernel_grid(&ExactConstOneKernel, 101).unwrap();
        for (i, d) in exact.diagonal().iter().enumerate() {
            assert!((d - exact.grid().point(i) / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn csv_layout() {
        let kg = KernelGrid::zeros(KernelKind::G, 3).unwrap();
        let mut out = Vec::new();
        kg.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,t,value");
        assert_eq!(lines.len(), 7);
        assert!(!text.contains('\r'));
    }
}
