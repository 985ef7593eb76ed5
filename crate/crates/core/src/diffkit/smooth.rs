use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::jet::Jet3;
use crate::{Error, Result};

/// An open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    /// Closed-interval membership, for parameter ranges that include their ends.
    pub fn contains_closed(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo < self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

type JetFn = dyn Fn(Jet3) -> Jet3 + Send + Sync;

/// A smooth scalar function on an open interval, evaluated through jets.
///
/// The evaluator maps an input jet to the output jet, so evaluating at
/// `Jet3::variable(x)` yields the value and first three derivatives at `x`,
/// and evaluating at any other jet composes by the chain rule.
#[derive(Clone)]
pub struct SmoothFn1 {
    name: String,
    domain: Interval,
    eval: Arc<JetFn>,
}

impl fmt::Debug for SmoothFn1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothFn1")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .finish()
    }
}

impl SmoothFn1 {
    pub fn new(
        name: impl Into<String>,
        domain: Interval,
        eval: impl Fn(Jet3) -> Jet3 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            domain,
            eval: Arc::new(eval),
        }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(format!("const {value}"), Interval::REAL_LINE, move |_| {
            Jet3::constant(value)
        })
    }

    /// `c0 + c1 x + c2 x^2 + ...`
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        let name = format!("poly {coeffs:?}");
        Self::new(name, Interval::REAL_LINE, move |x| {
            coeffs
                .iter()
                .rev()
                .fold(Jet3::constant(0.0), |acc, &c| acc * x + c)
        })
    }

    /// `offset + sin x`
    pub fn sin_offset(offset: f64) -> Self {
        Self::new(format!("{offset} + sin"), Interval::REAL_LINE, move |x| {
            x.sin() + offset
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Value and derivatives at `x`.
    pub fn eval(&self, x: f64) -> Result<Jet3> {
        self.eval_jet(Jet3::variable(x))
    }

    /// Composition with an inner jet.
    pub fn eval_jet(&self, inner: Jet3) -> Result<Jet3> {
        let x = inner.value();
        if !self.domain.contains(x) {
            return Err(Error::OutOfDomain {
                what: "argument",
                value: x,
                domain: format!("{} of {}", self.domain, self.name),
            });
        }
        let out = (self.eval)(inner);
        if !out.is_finite() {
            return Err(Error::OutOfDomain {
                what: "argument",
                value: x,
                domain: format!("finite region of {}", self.name),
            });
        }
        Ok(out)
    }

    /// Plain value, for callers that do not need derivatives.
    pub fn value(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x)?.value())
    }
}
