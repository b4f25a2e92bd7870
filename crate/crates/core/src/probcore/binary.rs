//! Binary entropy (in bits) and binary convolution.

use crate::error::{Error, Result};

fn check_unit(t: f64) -> Result<()> {
    if t.is_finite() && (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::Domain {
            value: t,
            domain: "[0, 1]",
        })
    }
}

/// `h_b(t)` in bits.
pub fn binary_entropy(t: f64) -> Result<f64> {
    check_unit(t)?;
    let term = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    Ok(term(t) + term(1.0 - t))
}

/// Left branch inverse of [`binary_entropy`]: the `t` in `[0, 0.5]` with
/// `h_b(t) = y`, by bisection to 1e-12.
pub fn inv_binary_entropy(y: f64) -> Result<f64> {
    check_unit(y)?;
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Binary convolution `a * b = (1 - a) b + (1 - b) a`.
pub fn star(a: f64, b: f64) -> Result<f64> {
    check_unit(a)?;
    check_unit(b)?;
    Ok((1.0 - a) * b + (1.0 - b) * a)
}
