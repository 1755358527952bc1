use crate::error::{Error, Result};
use crate::numerics::UniformGrid;

/// Composite Simpson rule over the whole grid; needs an odd number of nodes.
pub fn simpson(grid: &UniformGrid, values: &[f64]) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(Error::Argument(format!(
            "{} values for a grid of {} points",
            values.len(),
            grid.len()
        )));
    }
    if values.len().is_multiple_of(2) {
        return Err(Error::Argument(format!(
            "Simpson rule needs an odd number of points, got {}",
            values.len()
        )));
    }
    Ok(simpson_even(grid.step(), values))
}

fn simpson_even(step: f64, values: &[f64]) -> f64 {
    let n = values.len() - 1;
    let mut acc = 0.0;
    for k in (0..n).step_by(2) {
        acc += values[k] + 4.0 * values[k + 1] + values[k + 2];
    }
    acc * step / 3.0
}

/// Integral over the span of `values` (uniform spacing `step`) for any number
/// of intervals: Simpson on an even count, closed by the 3/8 rule on the last
/// three intervals for an odd count, trapezoid for a single interval.
pub fn prefix_integral(step: f64, values: &[f64]) -> f64 {
    let n = values.len().saturating_sub(1);
    match n {
        0 => 0.0,
        1 => 0.5 * step * (values[0] + values[1]),
        _ if n.is_multiple_of(2) => simpson_even(step, values),
        _ => simpson_even(step, &values[..n - 2]) + three_eighths(step, &values[n - 3..]),
    }
}

fn three_eighths(step: f64, v: &[f64]) -> f64 {
    0.375 * step * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3])
}

/// `out[i] = prefix_integral(step, &values[..=i])`, in linear time.
pub fn cumulative_integral(step: f64, values: &[f64]) -> Vec<f64> {
    let m = values.len();
    let mut out = vec![0.0; m];
    if m < 2 {
        return out;
    }
    // even prefixes first, odd ones are closed from them
    let mut acc = 0.0;
    for i in (2..m).step_by(2) {
        acc += values[i - 2] + 4.0 * values[i - 1] + values[i];
        out[i] = acc * step / 3.0;
    }
    out[1] = 0.5 * step * (values[0] + values[1]);
    for i in (3..m).step_by(2) {
        out[i] = out[i - 3] + three_eighths(step, &values[i - 3..=i]);
    }
    out
}
