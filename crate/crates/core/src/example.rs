//! The unit potential `q = 1` with `h = 0`, where everything is known in closed
//! form: `c(0, x) = T[1](x) = cosh x` and `G` is a Bessel expression.
//!
//! Three truncated series for `G` are available:
//! 1. the plain eigenfunction series for `H = 0`;
//! 2. the series for `H = -pi/2`, for which `omega = 0`; its eigenvalues come
//!    from roots of `mu sin(mu pi) + (pi/2) cos(mu pi) = 0`;
//! 3. the accelerated series for `H = 0`, with `omega = pi/2`.
//!
//! Each one also gives an approximation of `cosh x = T[1](x)` by integrating
//! the kernel in `t` term by term.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{fmt_f64, write_columns};
use crate::kernels::{check_triangle, exact_g_const1};
use crate::numerics::{find_root_bracketed, FunctionSamples, UniformGrid};

/// `omega` for `q = 1`, `h = H = 0`.
pub const OMEGA: f64 = FRAC_PI_2;

/// Points of the x-grid on which sup-norm errors are measured.
pub const SUP_GRID_POINTS: usize = 401;

const ROOT_TOL: f64 = 1e-14;

/// Which of the three series representations to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Representation {
    Plain,
    ZeroOmega,
    Accelerated,
}

impl Representation {
    pub const ALL: [Representation; 3] = [Self::Plain, Self::ZeroOmega, Self::Accelerated];

    pub fn number(self) -> u8 {
        match self {
            Self::Plain => 1,
            Self::ZeroOmega => 2,
            Self::Accelerated => 3,
        }
    }
}

impl From<Representation> for u8 {
    fn from(r: Representation) -> u8 {
        r.number()
    }
}

impl TryFrom<u8> for Representation {
    type Error = Error;

    fn try_from(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Self::Plain),
            2 => Ok(Self::ZeroOmega),
            3 => Ok(Self::Accelerated),
            _ => Err(Error::Argument(format!(
                "representation must be 1, 2 or 3, got {k}"
            ))),
        }
    }
}

impl FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let k: u8 = s
            .trim()
            .parse()
            .map_err(|_| Error::Argument(format!("representation must be 1, 2 or 3, got '{s}'")))?;
        k.try_into()
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// `mu sin(mu pi) + (pi/2) cos(mu pi)`.
pub fn characteristic(mu: f64) -> f64 {
    mu * (mu * PI).sin() + FRAC_PI_2 * (mu * PI).cos()
}

/// Roots of the characteristic equation for `q = 1`, `h = 0`, `H = -pi/2`.
///
/// The lowest root is imaginary, `mu_0 = i nu_0`; the others satisfy
/// `n - 1/2 < mu_n < n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicRoots {
    nu0: f64,
    positive: Vec<f64>,
}

/// Solves for `nu_0` and `mu_1, ..., mu_{n_max}`.
pub fn mu_roots(n_max: usize) -> Result<CharacteristicRoots> {
    let nu0 = find_root_bracketed(|v| FRAC_PI_2 - v * (v * PI).tanh(), 0.5, 3.0, ROOT_TOL)?;
    let positive = (1..=n_max)
        .into_par_iter()
        .map(|n| find_root_bracketed(characteristic, n as f64 - 0.5, n as f64, ROOT_TOL))
        .collect::<Result<Vec<f64>>>()?;
    Ok(CharacteristicRoots { nu0, positive })
}

impl CharacteristicRoots {
    pub fn n_max(&self) -> usize {
        self.positive.len()
    }

    /// `nu_0 = |mu_0|`.
    pub fn nu0(&self) -> f64 {
        self.nu0
    }

    /// `mu_0^2 = -nu_0^2`.
    pub fn mu0_squared(&self) -> f64 {
        -self.nu0 * self.nu0
    }

    /// `mu_n` for `1 <= n <= n_max`.
    pub fn mu(&self, n: usize) -> f64 {
        assert!(n >= 1, "mu_0 is imaginary; use nu0()");
        self.positive[n - 1]
    }

    /// `mu_n^2` for every `n`, starting with the negative `mu_0^2`.
    pub fn mu_squared(&self) -> Vec<f64> {
        std::iter::once(self.mu0_squared())
            .chain(self.positive.iter().map(|m| m * m))
            .collect()
    }

    /// Eigenvalue `lambda_n = mu_n^2 + 1`.
    pub fn lambda(&self, n: usize) -> f64 {
        if n == 0 {
            self.mu0_squared() + 1.0
        } else {
            self.mu(n).powi(2) + 1.0
        }
    }

    /// Closed-form normalizing constant `int_0^pi cos^2(mu_n x) dx`.
    pub fn alpha(&self, n: usize) -> f64 {
        if n == 0 {
            FRAC_PI_2 + (2.0 * self.nu0 * PI).sinh() / (4.0 * self.nu0)
        } else {
            let mu = self.mu(n);
            FRAC_PI_2 + (2.0 * mu * PI).sin() / (4.0 * mu)
        }
    }

    fn require(&self, order: usize) -> Result<()> {
        if order > self.n_max() {
            return Err(Error::Argument(format!(
                "order {order} needs more than the {} computed roots",
                self.n_max()
            )));
        }
        Ok(())
    }
}

fn alpha0(n: usize) -> f64 {
    if n == 0 {
        PI
    } else {
        FRAC_PI_2
    }
}

/// `cos(sqrt(n^2 - 1) x)`, the unit-potential eigenfunction at `lambda = n^2`.
fn c_at_square(n: usize, x: f64) -> f64 {
    (((n * n - 1) as f64).sqrt() * x).cos()
}

/// Truncated plain series for `H = 0`, terms `n <= order`.
pub fn g1_eval(x: f64, t: f64, order: usize) -> Result<f64> {
    check_triangle(x, t)?;
    let mut sum = (x.cosh() - t.cos()) / PI;
    for n in 1..=order {
        let nf = n as f64;
        let rho = (nf * nf + 1.0).sqrt();
        sum += (c_at_square(n, x) * (nf * t).cos() - (nf * x).cos() * (rho * t).cos()) / alpha0(n);
    }
    Ok(sum)
}

/// Truncated series for `H = -pi/2`, terms `n <= order`.
pub fn g2_eval(roots: &CharacteristicRoots, x: f64, t: f64, order: usize) -> Result<f64> {
    check_triangle(x, t)?;
    roots.require(order)?;
    let nu = roots.nu0();
    let r0 = (nu * nu - 1.0).sqrt();
    let mut sum = x.cosh() / PI - (nu * x).cosh() * (r0 * t).cosh() / roots.alpha(0);
    for n in 1..=order {
        let mu = roots.mu(n);
        let rho = roots.lambda(n).sqrt();
        sum += c_at_square(n, x) * (n as f64 * t).cos() / alpha0(n)
            - (mu * x).cos() * (rho * t).cos() / roots.alpha(n);
    }
    Ok(sum)
}

/// Truncated accelerated series for `H = 0`, terms `n <= order`.
pub fn g3_eval(x: f64, t: f64, order: usize) -> Result<f64> {
    check_triangle(x, t)?;
    let mut sum = (x.cosh() - t.cos()) / PI + OMEGA / (PI * PI) * (PI * x - x * x - t * t);
    for n in 1..=order {
        let nf = n as f64;
        let rho = (nf * nf + 1.0).sqrt();
        let (snx, cnx) = (nf * x).sin_cos();
        let (snt, cnt) = (nf * t).sin_cos();
        sum += 2.0 / PI
            * (c_at_square(n, x) * cnt
                - cnx * (rho * t).cos()
                - (x * snx * cnt + t * snt * cnx) / (2.0 * nf));
    }
    Ok(sum)
}

/// `G_kind(x, t)` truncated at `order`; `roots` is needed only for the second kind.
pub fn g_representation(
    kind: Representation,
    roots: Option<&CharacteristicRoots>,
    x: f64,
    t: f64,
    order: usize,
) -> Result<f64> {
    match kind {
        Representation::Plain => g1_eval(x, t, order),
        Representation::ZeroOmega => g2_eval(need_roots(roots)?, x, t, order),
        Representation::Accelerated => g3_eval(x, t, order),
    }
}

fn need_roots(roots: Option<&CharacteristicRoots>) -> Result<&CharacteristicRoots> {
    roots.ok_or_else(|| {
        Error::Argument("the second representation needs characteristic roots".into())
    })
}

/// Approximation of `cosh x` from the kind-th series truncated at `order`.
pub fn cosh_approx(
    kind: Representation,
    roots: Option<&CharacteristicRoots>,
    x: f64,
    order: usize,
) -> Result<f64> {
    if !(0.0..=PI + 1e-12).contains(&x) {
        return Err(Error::Domain(format!("x must lie in [0, pi], got {x}")));
    }
    let shared = |n: usize| c_at_square(n, x) * (n as f64 * x).sin() / n as f64;
    let unit_sum = |n: usize| {
        let rho = ((n * n + 1) as f64).sqrt();
        shared(n) - (n as f64 * x).cos() * (rho * x).sin() / rho
    };
    let value = match kind {
        Representation::Plain => {
            1.0 + (x * x.cosh() - x.sin()) / PI
                + (1..=order).map(|n| 2.0 / PI * unit_sum(n)).sum::<f64>()
        }
        Representation::ZeroOmega => {
            let roots = need_roots(roots)?;
            roots.require(order)?;
            let nu = roots.nu0();
            let r0 = (nu * nu - 1.0).sqrt();
            1.0 + x * x.cosh() / PI - (nu * x).cosh() * (r0 * x).sinh() / (roots.alpha(0) * r0)
                + (1..=order)
                    .map(|n| {
                        let rho = roots.lambda(n).sqrt();
                        2.0 / PI * shared(n)
                            - (roots.mu(n) * x).cos() * (rho * x).sin() / (roots.alpha(n) * rho)
                    })
                    .sum::<f64>()
        }
        Representation::Accelerated => {
            1.0 + (x * x.cosh() - x.sin()) / PI + OMEGA * x * x / PI
                - 4.0 * OMEGA * x.powi(3) / (3.0 * PI * PI)
                + (1..=order)
                    .map(|n| {
                        let nf = n as f64;
                        2.0 / PI
                            * (unit_sum(n) + x * (2.0 * nf * x).cos() / (2.0 * nf * nf)
                                - (2.0 * nf * x).sin() / (4.0 * nf.powi(3)))
                    })
                    .sum::<f64>()
        }
    };
    Ok(value)
}

/// Sup-norm errors of the three `cosh` approximations at one truncation order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    #[serde(rename = "N")]
    pub order: usize,
    pub err1: f64,
    pub err2: f64,
    pub err3: f64,
}

impl ErrorRow {
    pub fn error(&self, kind: Representation) -> f64 {
        match kind {
            Representation::Plain => self.err1,
            Representation::ZeroOmega => self.err2,
            Representation::Accelerated => self.err3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorTable {
    pub rows: Vec<ErrorRow>,
}

impl ErrorTable {
    pub fn row(&self, order: usize) -> Option<&ErrorRow> {
        self.rows.iter().find(|r| r.order == order)
    }

    /// Columns `N,err1,err2,err3`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "N,err1,err2,err3")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{}",
                r.order,
                fmt_f64(r.err1),
                fmt_f64(r.err2),
                fmt_f64(r.err3)
            )?;
        }
        Ok(())
    }
}

/// Sup-norm error of `cosh_approx` over a `grid_m`-point grid on `[0, pi]`.
pub fn sup_error(
    kind: Representation,
    roots: Option<&CharacteristicRoots>,
    order: usize,
    grid_m: usize,
) -> Result<f64> {
    let grid = UniformGrid::standard(grid_m)?;
    grid.points()
        .into_iter()
        .map(|x| Ok((cosh_approx(kind, roots, x, order)? - x.cosh()).abs()))
        .try_fold(0.0, |acc, e: Result<f64>| Ok(f64::max(acc, e?)))
}

/// Error table for each truncation order in `orders`.
pub fn build_error_table(orders: &[usize], grid_m: usize) -> Result<ErrorTable> {
    if orders.is_empty() {
        return Err(Error::Argument("no truncation orders given".into()));
    }
    if let Some(&bad) = orders.iter().find(|&&n| n == 0) {
        return Err(Error::Argument(format!(
            "truncation order must be positive, got {bad}"
        )));
    }
    let roots = mu_roots(*orders.iter().max().unwrap_or(&1))?;
    let rows = orders
        .par_iter()
        .map(|&order| {
            let err = |k| sup_error(k, Some(&roots), order, grid_m);
            Ok(ErrorRow {
                order,
                err1: err(Representation::Plain)?,
                err2: err(Representation::ZeroOmega)?,
                err3: err(Representation::Accelerated)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorTable { rows })
}

/// `|G_kind(pi, t_j) - G(pi, t_j)|` on an `m`-point t-grid over `[0, pi]`.
pub fn kernel_error_profile(
    kind: Representation,
    order: usize,
    m: usize,
) -> Result<FunctionSamples> {
    let roots = match kind {
        Representation::ZeroOmega => Some(mu_roots(order)?),
        _ => None,
    };
    let grid = UniformGrid::standard(m)?;
    let values = grid
        .points()
        .into_par_iter()
        .map(|t| {
            Ok(
                (g_representation(kind, roots.as_ref(), PI, t, order)? - exact_g_const1(PI, t)?)
                    .abs(),
            )
        })
        .collect::<Result<Vec<f64>>>()?;
    FunctionSamples::new(grid, values)
}

/// Columns `t,abs_error`.
pub fn write_profile_csv<W: Write>(profile: &FunctionSamples, mut w: W) -> Result<()> {
    write_columns(&mut w, "t,abs_error", profile)
}

/// File name `kernel_profile_{kind}_{N}.csv`.
pub fn profile_file_name(kind: Representation, order: usize) -> String {
    format!("kernel_profile_{kind}_{order}.csv")
}
