use crate::error::{Error, Result};

/// Root of `f` inside the sign-change bracket `[a, b]`.
///
/// Bisects until the bracket is no wider than `tol` (or can no longer be
/// split in floating point), then takes one secant step across the final
/// bracket. An exact zero at a midpoint is returned as is.
pub fn find_root_bracketed(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Argument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Argument(format!("bracket [{a}, {b}] is not finite")));
    }
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let (mut flo, mut fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.signum() * fhi.signum() < 0.0) {
        return Err(Error::Bracket {
            a: lo,
            b: hi,
            fa: flo,
            fb: fhi,
        });
    }
    while hi - lo > tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.is_nan() {
            return Err(Error::Bracket {
                a: lo,
                b: hi,
                fa: flo,
                fb: fhi,
            });
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    let secant = hi - fhi * (hi - lo) / (fhi - flo);
    if secant.is_finite() && (lo..=hi).contains(&secant) {
        Ok(secant)
    } else {
        Ok(lo + 0.5 * (hi - lo))
    }
}
