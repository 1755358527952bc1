use crate::error::{Error, Result};

/// Modified Bessel function of the first kind of order one, by its power series
/// `(z/2) sum_k (z^2/4)^k / (k! (k+1)!)`.
///
/// Meant for `0 <= z <= 20`; terms are summed until one drops below `1e-18`
/// of the running sum.
pub fn bessel_i1(z: f64) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Argument(format!(
            "I1 needs a finite z >= 0, got {z}"
        )));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let quarter_sq = 0.25 * z * z;
    let mut term = 0.5 * z;
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= quarter_sq / (k * (k + 1.0));
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    Ok(sum)
}
