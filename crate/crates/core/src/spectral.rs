//! Eigenvalues, weight numbers and the asymptotic constant of the
//! Sturm-Liouville problem.
//!
//! Every eigenvalue `lambda_n` is isolated by its index: the scaled Prüfer
//! angle of `c(rho, x)` at `x = pi` counts the eigenvalues below a trial
//! `lambda`, so a bracket holding exactly the `n`-th eigenvalue can always
//! be certified before the characteristic function is bisected.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    find_root_bracketed, prefix_integral, simpson, CauchySolution, FunctionSamples, StepTable,
    UniformGrid, DEFAULT_GRID_POINTS,
};
use crate::potential::Potential;

/// Absolute tolerance on each eigenvalue.
pub const EIGENVALUE_TOL: f64 = 1e-11;

const BRACKET_HALF_WIDTH: f64 = 0.45;
const MAX_REFINEMENTS: usize = 400;

/// `alpha_n^0`: `pi` for `n = 0`, `pi / 2` otherwise.
pub fn unperturbed_alpha(n: usize) -> f64 {
    if n == 0 {
        PI
    } else {
        PI / 2.0
    }
}

/// `q` on `[0, pi]` with the boundary constants `h` (at 0) and `H` (at pi).
#[derive(Debug, Clone)]
pub struct Problem {
    potential: Potential,
    h: f64,
    big_h: f64,
    steps: StepTable,
}

impl Problem {
    pub fn new(potential: Potential, h: f64, big_h: f64) -> Result<Self> {
        Self::with_grid(potential, h, big_h, DEFAULT_GRID_POINTS)
    }

    /// Same as [`Problem::new`] with `m` integration nodes on `[0, pi]`.
    pub fn with_grid(potential: Potential, h: f64, big_h: f64, m: usize) -> Result<Self> {
        if !(h.is_finite() && big_h.is_finite()) {
            return Err(Error::Argument(format!(
                "boundary constants must be finite: h = {h}, H = {big_h}"
            )));
        }
        let grid = UniformGrid::standard(m)?;
        if let Some(j) = (0..m).find(|&j| !potential.eval(grid.point(j)).is_finite()) {
            return Err(Error::Argument(format!(
                "potential is not finite at x = {}",
                grid.point(j)
            )));
        }
        let steps = StepTable::new(&potential, grid);
        Ok(Self {
            potential,
            h,
            big_h,
            steps,
        })
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn big_h(&self) -> f64 {
        self.big_h
    }

    pub fn grid(&self) -> &UniformGrid {
        self.steps.grid()
    }

    /// `c(sqrt(lambda), .)` on the problem grid.
    pub fn solve(&self, lambda: f64) -> Result<CauchySolution> {
        if !lambda.is_finite() {
            return Err(Error::Argument(format!(
                "lambda must be finite, got {lambda}"
            )));
        }
        self.steps.solve(lambda, 1.0, self.h)
    }

    /// `q` at every grid node.
    pub(crate) fn potential_samples(&self) -> Vec<f64> {
        self.grid()
            .points()
            .into_iter()
            .map(|x| self.potential.eval(x))
            .collect()
    }

    /// Number of eigenvalues strictly below `lambda`.
    pub fn count_below(&self, lambda: f64) -> Result<usize> {
        let sigma = lambda.max(1.0).sqrt();
        let mut theta = 0.0;
        let mut prev = 0.0;
        self.steps.propagate(lambda, 1.0, self.h, |j, y, yp| {
            let raw = y.atan2(yp / sigma);
            if j == 0 {
                theta = raw;
            } else {
                let mut d = raw - prev;
                if d > PI {
                    d -= 2.0 * PI;
                } else if d <= -PI {
                    d += 2.0 * PI;
                }
                theta += d;
            }
            prev = raw;
        })?;
        let beta = sigma.atan2(-self.big_h);
        let excess = theta - beta;
        Ok(if excess <= 0.0 {
            0
        } else {
            (excess / PI).ceil() as usize
        })
    }

    /// Lower end of the eigenvalue search: no eigenvalue of a desk-scale
    /// problem lies below it.
    fn scan_floor(&self) -> f64 {
        let qmax = self.potential.max_abs(self.grid());
        let robin = self.h.abs() + self.big_h.abs() + 1.0;
        -(2.0 + qmax + robin * robin)
    }
}

/// `Delta(lambda) = c'(rho, pi) + H c(rho, pi)`; its zeros are the eigenvalues.
pub fn characteristic(problem: &Problem, lambda: f64) -> Result<f64> {
    let (c, cp) = problem
        .steps
        .propagate(lambda, 1.0, problem.h, |_, _, _| {})?;
    Ok(cp + problem.big_h * c)
}

/// `omega = h + H + (1/2) int_0^pi q`.
pub fn omega_constant(problem: &Problem) -> f64 {
    let q = problem.potential_samples();
    problem.h + problem.big_h + 0.5 * prefix_integral(problem.grid().step(), &q)
}

/// `alpha = int_0^pi c(rho, x)^2 dx` by Simpson on the problem grid.
pub fn normalizing_constant(problem: &Problem, lambda_n: f64) -> Result<f64> {
    let sol = problem.solve(lambda_n)?;
    let sq: Vec<f64> = sol.c.iter().map(|c| c * c).collect();
    if sq.len() % 2 == 1 {
        simpson(problem.grid(), &sq)
    } else {
        Ok(prefix_integral(problem.grid().step(), &sq))
    }
}

/// `c(sqrt(lambda), .)` sampled on the problem grid.
pub fn eigenfunction(problem: &Problem, lambda: f64) -> Result<FunctionSamples> {
    let sol = problem.solve(lambda)?;
    FunctionSamples::new(sol.grid, sol.c)
}

/// One eigenpair summary. `k` and `K` are the scaled remainders of the
/// asymptotics `rho_n = n + omega / (pi n) + k_n / n`, `alpha_n = pi/2 + K_n / n`;
/// they are undefined (`None`) for `n = 0` and `k` also for negative `lambda_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub n: usize,
    pub lambda: f64,
    pub alpha: f64,
    pub k: Option<f64>,
    #[serde(rename = "K")]
    pub big_k: Option<f64>,
}

impl Mode {
    pub fn new(n: usize, lambda: f64, alpha: f64, omega: f64) -> Self {
        let (k, big_k) = if n == 0 {
            (None, None)
        } else {
            let nf = n as f64;
            let k = (lambda >= 0.0).then(|| nf * (lambda.sqrt() - nf) - omega / PI);
            (k, Some(nf * (alpha - PI / 2.0)))
        };
        Self {
            n,
            lambda,
            alpha,
            k,
            big_k,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub omega: f64,
    pub modes: Vec<Mode>,
}

impl SpectralData {
    /// Assembles spectral data from eigenvalues and weight numbers indexed from 0.
    pub fn from_parts(omega: f64, lambdas: &[f64], alphas: &[f64]) -> Result<Self> {
        if lambdas.len() != alphas.len() || lambdas.is_empty() {
            return Err(Error::Argument(
                "need matching, non-empty eigenvalue and weight lists".into(),
            ));
        }
        if lambdas.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Argument(
                "eigenvalues must be strictly increasing".into(),
            ));
        }
        if let Some(n) = alphas.iter().position(|a| !(*a > 0.0)) {
            return Err(Error::Argument(format!(
                "weight number alpha_{n} is not positive"
            )));
        }
        let modes = lambdas
            .iter()
            .zip(alphas)
            .enumerate()
            .map(|(n, (&l, &a))| Mode::new(n, l, a, omega))
            .collect();
        Ok(Self { omega, modes })
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Largest available index.
    pub fn n_max(&self) -> usize {
        self.modes.len() - 1
    }

    pub fn lambda(&self, n: usize) -> f64 {
        self.modes[n].lambda
    }

    pub fn alpha(&self, n: usize) -> f64 {
        self.modes[n].alpha
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.lambda).collect()
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.alpha).collect()
    }

    pub(crate) fn require(&self, order: usize) -> Result<()> {
        if order >= self.modes.len() {
            return Err(Error::Argument(format!(
                "series order {order} needs {} modes, only {} available",
                order + 1,
                self.modes.len()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Eigenvalues `lambda_0 < ... < lambda_{n_max}` with weight numbers and residuals.
pub fn compute_spectrum(problem: &Problem, n_max: usize) -> Result<SpectralData> {
    let omega = omega_constant(problem);
    let floor = problem.scan_floor();
    let below_floor = problem.count_below(floor)?;
    if below_floor > 0 {
        return Err(Error::ScanRange(format!(
            "{below_floor} eigenvalue(s) lie below the scan floor {floor}"
        )));
    }
    let lambdas = (0..=n_max)
        .into_par_iter()
        .map(|n| find_eigenvalue(problem, n, omega, floor))
        .collect::<Result<Vec<_>>>()?;
    let alphas = lambdas
        .par_iter()
        .map(|&l| normalizing_constant(problem, l))
        .collect::<Result<Vec<_>>>()?;
    if let Some(w) = lambdas.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::ScanRange(format!(
            "eigenvalues {w} and {} are not separated: {} vs {}",
            w + 1,
            lambdas[w],
            lambdas[w + 1]
        )));
    }
    SpectralData::from_parts(omega, &lambdas, &alphas)
}

fn find_eigenvalue(problem: &Problem, n: usize, omega: f64, floor: f64) -> Result<f64> {
    let count = |l: f64| problem.count_below(l);

    // asymptotic localisation rho_n ~ n + omega / (pi n)
    let (mut lo, mut hi) = if n == 0 {
        (floor, (BRACKET_HALF_WIDTH + (omega / PI).max(0.0)).powi(2))
    } else {
        let guess = n as f64 + omega / (PI * n as f64);
        let left = guess - BRACKET_HALF_WIDTH;
        let lo = if left > 0.0 { left * left } else { floor };
        (lo, (guess + BRACKET_HALF_WIDTH).max(0.0).powi(2))
    };
    let mut c_lo = count(lo)?;
    if c_lo > n {
        lo = floor;
        c_lo = 0;
    }
    let mut c_hi = count(hi)?;
    let mut expansions = 0;
    while c_hi <= n {
        expansions += 1;
        if expansions > 64 {
            return Err(Error::ScanRange(format!(
                "eigenvalue {n} not found below lambda = {hi}"
            )));
        }
        lo = hi;
        c_lo = c_hi;
        hi = (hi.max(0.0).sqrt() + 1.0).powi(2);
        c_hi = count(hi)?;
    }

    // shrink until the bracket holds exactly lambda_n
    let mut refinements = 0;
    while !(c_lo == n && c_hi == n + 1) {
        refinements += 1;
        if refinements > MAX_REFINEMENTS {
            return Err(Error::ScanRange(format!(
                "could not isolate eigenvalue {n} in [{lo}, {hi}]"
            )));
        }
        let mid = 0.5 * (lo + hi);
        let c_mid = count(mid)?;
        if c_mid <= n {
            lo = mid;
            c_lo = c_mid;
        } else {
            hi = mid;
            c_hi = c_mid;
        }
    }

    let delta = |l: f64| characteristic(problem, l).unwrap_or(f64::NAN);
    find_root_bracketed(delta, lo, hi, EIGENVALUE_TOL).map_err(|e| match e {
        Error::Bracket { a, b, .. } => Error::ScanRange(format!(
            "characteristic function has no sign change around eigenvalue {n} in [{a}, {b}]"
        )),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(q: f64, h: f64, big_h: f64) -> Problem {
        Problem::new(Potential::constant(q), h, big_h).unwrap()
    }

    #[test]
    fn characteristic_zero_potential() {
        let p = problem(0.0, 0.0, 0.0);
        for lambda in [0.3f64, 2.0, 7.7] {
            let r = lambda.sqrt();
            let expected = -r * (r * PI).sin();
            assert!((characteristic(&p, lambda).unwrap() - expected).abs() < 1e-10);
        }
        for n in 0..6 {
            assert!(characteristic(&p, (n * n) as f64).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn characteristic_matches_closed_equation() {
        // q = 1, h = 0, H = -pi/2: Delta = -mu sin(mu pi) - (pi/2) cos(mu pi)
        let p = problem(1.0, 0.0, -PI / 2.0);
        for mu in [0.4f64, 1.3, 2.9] {
            let expected = -(mu * (mu * PI).sin() + PI / 2.0 * (mu * PI).cos());
            let got = characteristic(&p, mu * mu + 1.0).unwrap();
            assert!((got - expected).abs() < 1e-10, "{mu}: {got} vs {expected}");
        }
    }

    #[test]
    fn counting_function() {
        let p = problem(0.0, 0.0, 0.0);
        assert_eq!(p.count_below(-1.0).unwrap(), 0);
        assert_eq!(p.count_below(0.5).unwrap(), 1);
        assert_eq!(p.count_below(3.9).unwrap(), 2);
        assert_eq!(p.count_below(4.1).unwrap(), 3);
        assert_eq!(p.count_below(10_000.5).unwrap(), 101);
    }

    #[test]
    fn zero_potential_spectrum() {
        let s = compute_spectrum(&problem(0.0, 0.0, 0.0), 5).unwrap();
        for n in 0..=5 {
            assert!(
                (s.lambda(n) - (n * n) as f64).abs() < 1e-9,
                "{n}: {}",
                s.lambda(n)
            );
            assert!((s.alpha(n) - unperturbed_alpha(n)).abs() < 1e-9);
        }
        assert_eq!(s.omega, 0.0);
    }

    #[test]
    fn unit_potential_spectrum() {
        let s = compute_spectrum(&problem(1.0, 0.0, 0.0), 5).unwrap();
        for n in 0..=5 {
            assert!((s.lambda(n) - (n * n + 1) as f64).abs() < 1e-8);
            assert!((s.alpha(n) - unperturbed_alpha(n)).abs() < 1e-8);
        }
        assert!((s.omega - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn negative_eigenvalue_with_zero_omega() {
        let p = problem(1.0, 0.0, -PI / 2.0);
        assert!(omega_constant(&p).abs() < 1e-12);
        let s = compute_spectrum(&p, 6).unwrap();
        assert!((s.lambda(0) + 1.468).abs() < 0.01, "{}", s.lambda(0));
        assert!(s.lambda(1) > 0.0);
        for n in 1..=6 {
            let mu = (s.lambda(n) - 1.0).sqrt();
            let closed = PI / 2.0 + (2.0 * mu * PI).sin() / (4.0 * mu);
            assert!((s.alpha(n) - closed).abs() < 1e-8);
        }
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_constant(&problem(0.0, 0.0, 0.0)), 0.0);
        assert!((omega_constant(&problem(1.0, 0.0, 0.0)) - PI / 2.0).abs() < 1e-12);
        let ramp = Problem::new(Potential::from_fn(|x| x / PI), 0.5, 0.25).unwrap();
        assert!((omega_constant(&ramp) - (0.75 + PI / 4.0)).abs() < 1e-12);
    }

    #[test]
    fn eigenfunction_examples() {
        let zero = problem(0.0, 0.0, 0.0);
        let f = eigenfunction(&zero, 9.0).unwrap();
        assert!(f.max_abs_error(|x| (3.0 * x).cos()) < 1e-11);

        let one = problem(1.0, 0.0, 0.0);
        let f = eigenfunction(&one, 16.0).unwrap();
        assert!(f.max_abs_error(|x| (15f64.sqrt() * x).cos()) < 1e-11);
        let f = eigenfunction(&one, 0.0).unwrap();
        assert!(f.max_abs_error(f64::cosh) < 1e-10);
    }

    #[test]
    fn robin_constants_move_the_spectrum() {
        // q = 0, h = H = 1: tan(rho pi) = 2 rho / (rho^2 - 1)
        let s = compute_spectrum(&problem(0.0, 1.0, 1.0), 4).unwrap();
        for n in 0..=4 {
            let r = s.lambda(n).sqrt();
            let resid = (r * r - 1.0) * (r * PI).sin() - 2.0 * r * (r * PI).cos();
            assert!(resid.abs() < 1e-8, "{n}: {resid}");
        }
        assert!(s.lambda(0) > 0.0 && s.lambda(0) < 1.0);
    }

    #[test]
    fn negative_robin_constant_gives_negative_ground_state() {
        // q = 0, h = -2, H = 0: lambda_0 = -nu^2 with nu tanh(nu pi) = 2
        let s = compute_spectrum(&problem(0.0, -2.0, 0.0), 3).unwrap();
        let nu = (-s.lambda(0)).sqrt();
        assert!((nu * (nu * PI).tanh() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn json_layout() {
        let s = SpectralData::from_parts(0.5, &[1.0, 2.0], &[PI, PI / 2.0]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s.to_json().unwrap()).unwrap();
        assert_eq!(v["omega"], 0.5);
        assert_eq!(v["modes"][1]["n"], 1);
        assert!(v["modes"][1]["K"].is_number());
        assert!(v["modes"][0]["k"].is_null());
        assert_eq!(SpectralData::from_json(&s.to_json().unwrap()).unwrap(), s);
    }

    #[test]
    fn from_parts_validation() {
        assert!(SpectralData::from_parts(0.0, &[1.0, 1.0], &[1.0, 1.0]).is_err());
        assert!(SpectralData::from_parts(0.0, &[1.0, 2.0], &[1.0, 0.0]).is_err());
        assert!(SpectralData::from_parts(0.0, &[], &[]).is_err());
    }
}
