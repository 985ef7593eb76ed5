//! Scalar fields on the `(u, v)` plane carrying analytic partials up to second order.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diffkit::{central_5pt, Jet3, SmoothFn1};
use crate::{Error, Result};

/// Value and partials of a scalar field at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Partials2 {
    pub value: f64,
    pub u: f64,
    pub v: f64,
    pub uu: f64,
    pub uv: f64,
    pub vv: f64,
}

impl Partials2 {
    pub fn constant(value: f64) -> Self {
        Self {
            value,
            ..Self::default()
        }
    }

    /// `A(u) B(v)` from order-3 jets of both factors.
    pub fn separable(a: &Jet3, b: &Jet3) -> Self {
        Self {
            value: a.value() * b.value(),
            u: a.d1() * b.value(),
            v: a.value() * b.d1(),
            uu: a.d2() * b.value(),
            uv: a.d1() * b.d1(),
            vv: a.value() * b.d2(),
        }
    }

    fn is_finite(&self) -> bool {
        [self.value, self.u, self.v, self.uu, self.uv, self.vv]
            .iter()
            .all(|x| x.is_finite())
    }
}

type FieldEval = dyn Fn(f64, f64) -> Result<Partials2> + Send + Sync;

/// Largest relative disagreement tolerated by the load-time finite-difference audit.
pub const FD_AUDIT_TOL: f64 = 1e-5;

/// A scalar field on a closed rectangle with supplied analytic partials.
#[derive(Clone)]
pub struct ScalarField2 {
    name: String,
    u_range: (f64, f64),
    v_range: (f64, f64),
    eval: Arc<FieldEval>,
}

impl fmt::Debug for ScalarField2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField2")
            .field("name", &self.name)
            .field("u_range", &self.u_range)
            .field("v_range", &self.v_range)
            .finish()
    }
}

impl ScalarField2 {
    /// Wraps `eval` and audits its partials against central differences on a
    /// 5x5 interior sample.
    pub fn new(
        name: impl Into<String>,
        u_range: (f64, f64),
        v_range: (f64, f64),
        eval: impl Fn(f64, f64) -> Result<Partials2> + Send + Sync + 'static,
    ) -> Result<Self> {
        let field = Self {
            name: name.into(),
            u_range,
            v_range,
            eval: Arc::new(eval),
        };
        for (lo, hi, axis) in [(u_range.0, u_range.1, "u"), (v_range.0, v_range.1, "v")] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(field.invalid(format!("{axis} range [{lo}, {hi}] is empty")));
            }
        }
        field.audit()?;
        Ok(field)
    }

    pub fn constant(value: f64, u_range: (f64, f64), v_range: (f64, f64)) -> Result<Self> {
        Self::new(format!("{value}"), u_range, v_range, move |_, _| {
            Ok(Partials2::constant(value))
        })
    }

    /// `A(u) B(v)`.
    pub fn separable(
        name: impl Into<String>,
        a: SmoothFn1,
        b: SmoothFn1,
        u_range: (f64, f64),
        v_range: (f64, f64),
    ) -> Result<Self> {
        Self::new(name, u_range, v_range, move |u, v| {
            Ok(Partials2::separable(&a.eval(u)?, &b.eval(v)?))
        })
    }

    fn invalid(&self, reason: String) -> Error {
        Error::InvalidField {
            name: self.name.clone(),
            reason,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn u_range(&self) -> (f64, f64) {
        self.u_range
    }

    pub fn v_range(&self) -> (f64, f64) {
        self.v_range
    }

    fn raw(&self, u: f64, v: f64) -> Result<Partials2> {
        let p = (self.eval)(u, v)?;
        if p.is_finite() {
            Ok(p)
        } else {
            Err(self.invalid(format!("non-finite partials at ({u}, {v})")))
        }
    }

    pub fn eval(&self, u: f64, v: f64) -> Result<Partials2> {
        let inside = |x: f64, (lo, hi): (f64, f64)| x >= lo && x <= hi;
        if !inside(u, self.u_range) || !inside(v, self.v_range) {
            return Err(Error::OutOfDomain {
                what: "field argument",
                value: if inside(u, self.u_range) { v } else { u },
                domain: format!(
                    "[{}, {}] x [{}, {}]",
                    self.u_range.0, self.u_range.1, self.v_range.0, self.v_range.1
                ),
            });
        }
        self.raw(u, v)
    }

    /// First partials against differences of the value, second partials against
    /// differences of the first partials.
    fn audit(&self) -> Result<()> {
        let (ulo, uhi) = self.u_range;
        let (vlo, vhi) = self.v_range;
        let hu = 1e-3 * (uhi - ulo);
        let hv = 1e-3 * (vhi - vlo);
        let check = |what: &str, u: f64, v: f64, analytic: f64, fd: f64| -> Result<()> {
            let rel = (analytic - fd).abs() / analytic.abs().max(1.0);
            if rel <= FD_AUDIT_TOL {
                Ok(())
            } else {
                Err(self.invalid(format!(
                    "{what} = {analytic} but finite differences give {fd} at ({u}, {v})"
                )))
            }
        };
        for i in 0..5 {
            for j in 0..5 {
                let u = ulo + (uhi - ulo) * (0.1 + 0.2 * i as f64);
                let v = vlo + (vhi - vlo) * (0.1 + 0.2 * j as f64);
                let p = self.raw(u, v)?;
                let along_u = |k: f64| self.raw(u + k * hu, v);
                let along_v = |k: f64| self.raw(u, v + k * hv);
                let su = [along_u(-2.0)?, along_u(-1.0)?, along_u(1.0)?, along_u(2.0)?];
                let sv = [along_v(-2.0)?, along_v(-1.0)?, along_v(1.0)?, along_v(2.0)?];
                let d = |s: &[Partials2; 4], pick: fn(&Partials2) -> f64, h: f64| {
                    central_5pt(pick(&s[0]), pick(&s[1]), pick(&s[2]), pick(&s[3]), h)
                };
                check("d/du", u, v, p.u, d(&su, |q| q.value, hu))?;
                check("d/dv", u, v, p.v, d(&sv, |q| q.value, hv))?;
                check("d2/du2", u, v, p.uu, d(&su, |q| q.u, hu))?;
                check("d2/dudv", u, v, p.uv, d(&sv, |q| q.u, hv))?;
                check("d2/dvdu", u, v, p.uv, d(&su, |q| q.v, hu))?;
                check("d2/dv2", u, v, p.vv, d(&sv, |q| q.v, hv))?;
            }
        }
        Ok(())
    }
}

/// `lambda`, `mu`, `nu` candidate triple.
#[derive(Debug, Clone)]
pub struct FieldTriple {
    pub lambda: ScalarField2,
    pub mu: ScalarField2,
    pub nu: ScalarField2,
}
