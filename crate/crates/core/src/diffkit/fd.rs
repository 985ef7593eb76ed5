//! Finite-difference audit of jets.

use super::smooth::SmoothFn1;
use crate::{Error, Result};

/// Fourth-order central first derivative from samples at `u-2h, u-h, u+h, u+2h`.
pub fn central_5pt(m2: f64, m1: f64, p1: f64, p2: f64, h: f64) -> f64 {
    (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h)
}

/// Max over orders 1..3 of `|jet_k - FD_k| / (1 + |jet_k|)`.
///
/// Order `k` is checked against a five-point central difference of the jet's
/// order `k-1`, so each comparison differentiates only once and the stencil is
/// exact on polynomials of degree 4.
pub fn fd_check(func: &SmoothFn1, u: f64, h: f64) -> Result<f64> {
    let domain = func.domain();
    if !(h > 0.0) || !domain.contains(u - 2.0 * h) || !domain.contains(u + 2.0 * h) {
        return Err(Error::OutOfDomain {
            what: "u +/- 2h",
            value: u,
            domain: domain.to_string(),
        });
    }
    let center = func.eval(u)?;
    let m2 = func.eval(u - 2.0 * h)?;
    let m1 = func.eval(u - h)?;
    let p1 = func.eval(u + h)?;
    let p2 = func.eval(u + 2.0 * h)?;
    let mut worst = 0.0_f64;
    for k in 1..=3 {
        let fd = central_5pt(
            m2.deriv(k - 1),
            m1.deriv(k - 1),
            p1.deriv(k - 1),
            p2.deriv(k - 1),
            h,
        );
        let jet = center.deriv(k);
        worst = worst.max((jet - fd).abs() / (1.0 + jet.abs()));
    }
    Ok(worst)
}
