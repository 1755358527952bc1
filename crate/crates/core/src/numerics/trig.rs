//! `cos(rho x)` and `sin(rho x) / rho` as analytic functions of `lambda = rho^2`,
//! so that negative eigenvalues map to their hyperbolic counterparts.

/// `cos(sqrt(lambda) x)`, or `cosh(sqrt(-lambda) x)` for `lambda < 0`.
pub fn cos_sqrt(lambda: f64, x: f64) -> f64 {
    if lambda >= 0.0 {
        (lambda.sqrt() * x).cos()
    } else {
        ((-lambda).sqrt() * x).cosh()
    }
}

/// `sin(sqrt(lambda) x) / sqrt(lambda)`, continued to `x` at `lambda = 0` and to
/// `sinh(sqrt(-lambda) x) / sqrt(-lambda)` for `lambda < 0`.
pub fn sin_sqrt_over_sqrt(lambda: f64, x: f64) -> f64 {
    if lambda > 0.0 {
        let r = lambda.sqrt();
        (r * x).sin() / r
    } else if lambda < 0.0 {
        let r = (-lambda).sqrt();
        (r * x).sinh() / r
    } else {
        x
    }
}
