//! Scalar root finding shared by every solver in the crate.
//!
//! All of the transcendental equations we need to solve (circumradius
//! equations, boundary-centered side lengths, the surface area constraints)
//! are monotone on a known bracket, so plain bisection is both sufficient and
//! unconditionally convergent.

use crate::error::{Error, Result};

/// Maximum number of bisection steps.
pub const MAX_ITER: usize = 200;

/// Guaranteed relative accuracy of a returned root. Bisection actually runs
/// until the bracket cannot be split in double precision, which is well
/// inside this bound after at most `MAX_ITER` steps.
pub const REL_TOL: f64 = 1e-12;

/// Finds a root of `f` in `[lo, hi]` by bisection.
///
/// `f(lo)` and `f(hi)` must have opposite signs (a zero at either end is
/// accepted and returned directly). Iteration stops when the midpoint no
/// longer separates the bracket ends, or after `MAX_ITER` halvings.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let fa0 = f(a);
    let fb0 = f(b);
    if fa0 == 0.0 {
        return Ok(a);
    }
    if fb0 == 0.0 {
        return Ok(b);
    }
    if !(fa0.is_finite() && fb0.is_finite()) || fa0.signum() == fb0.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo}, {hi}] (f = {fa0:e}, {fb0:e})"
        )));
    }
    let neg_at_a = fa0 < 0.0;
    for _ in 0..MAX_ITER {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == neg_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}
