//! Adaptive Simpson quadrature.

use super::smooth::SmoothFn1;
use crate::{Error, Result};

const MAX_DEPTH: u32 = 50;
const MAX_EVALS: usize = 200_000;

struct Budget {
    evals: usize,
    worst: f64,
}

/// `int_a^b fn(u) du` with absolute error at most `tol` on smooth integrands.
///
/// Both ends must lie in the open domain of `fn`; `b < a` gives the negated integral.
pub fn quadrature(func: &SmoothFn1, a: f64, b: f64, tol: f64) -> Result<f64> {
    let domain = func.domain();
    if !domain.contains(a) || !domain.contains(b) {
        return Err(Error::IntervalOutsideDomain {
            a,
            b,
            domain: domain.to_string(),
        });
    }
    integrate_values(
        |x| {
            func.value(x).map_err(|_| Error::IntervalOutsideDomain {
                a,
                b,
                domain: domain.to_string(),
            })
        },
        a,
        b,
        tol,
    )
}

/// Adaptive Simpson on a plain evaluator; the caller owns the domain check.
pub(crate) fn integrate_values(
    eval: impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate_values(eval, b, a, tol).map(|v| -v);
    }
    let fa = eval(a)?;
    let fb = eval(b)?;
    let m = 0.5 * (a + b);
    let fm = eval(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut budget = Budget {
        evals: 3,
        worst: 0.0,
    };
    let value = refine(&eval, a, b, fa, fm, fb, whole, tol, MAX_DEPTH, &mut budget)?;
    if budget.worst > 15.0 * tol {
        return Err(Error::ToleranceNotReached {
            tol,
            estimate: budget.worst / 15.0,
        });
    }
    Ok(value)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    eval: &impl Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &mut Budget,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(lm)?;
    let frm = eval(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    budget.evals += 2;
    let delta = left + right - whole;
    let exhausted = depth == 0 || budget.evals >= MAX_EVALS;
    if delta.abs() <= 15.0 * tol || exhausted {
        if exhausted {
            budget.worst = budget.worst.max(delta.abs());
        }
        return Ok(left + right + delta / 15.0);
    }
    Ok(
        refine(eval, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget)?
            + refine(eval, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget)?,
    )
}
