//! Isotropic parameters `ubar = s (U(u) + v) / sqrt 2`, `vbar = s (U(u) - v) / sqrt 2`
//! with `U' = 1/f`.
//!
//! Barred derivatives are never taken by inverting the chart: every barred
//! partial is assembled from `(u, v)` partials by the chain rule
//!
//! ```text
//! d/dubar = (f d/du + d/dv) / (sqrt2 s)
//! d/dvbar = (f d/du - d/dv) / (sqrt2 s)
//! d/dvbar d/dubar = (f f' d/du + f^2 d2/du2 - d2/dv2) / (2 s^2)
//! ```

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::fields::Partials2;
use crate::diffkit::integrate_values;
use crate::geometry::MeridianSurface;
use crate::minkowski::Vec4M;
use crate::{Error, Result};

const U_QUADRATURE_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum UMap {
    /// `U = asin((u - a) / R)`, `R = sqrt(a^2 + b)`: exact for `f^2 = -u^2 + 2au + b`.
    ArcSine { a: f64, r: f64 },
    /// `U = int_base^u dt / f(t)`.
    Quadrature { base: f64 },
}

/// Value and first barred partials plus the mixed barred second partial.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BarredPartials {
    pub value: f64,
    pub ubar: f64,
    pub vbar: f64,
    pub ubar_vbar: f64,
}

#[derive(Debug, Clone)]
pub struct IsotropicChart {
    surface: MeridianSurface,
    u_map: UMap,
    scale: f64,
}

impl IsotropicChart {
    /// Chart with `U` by quadrature from the lower end of the profile interval.
    pub fn new(surface: MeridianSurface) -> Self {
        let base = surface.profile().interval().lo;
        Self {
            surface,
            u_map: UMap::Quadrature { base },
            scale: 1.0,
        }
    }

    /// Chart with the closed-form `U = asin((u - a)/R)`; the profile must satisfy
    /// `f^2 = -u^2 + 2au + b`, which is checked on 17 samples.
    pub fn with_arcsine(surface: MeridianSurface, a: f64, b: f64) -> Result<Self> {
        let r2 = a * a + b;
        if !(r2 > 0.0) {
            return Err(Error::EmptyInterval(format!("a^2 + b = {r2}")));
        }
        let iv = surface.profile().interval();
        for i in 0..17 {
            let u = crate::grid::linspace(iv.lo, iv.hi, 17, i);
            let f = surface.profile().f_jet(u)?.value();
            let p = -u * u + 2.0 * a * u + b;
            if !((f * f - p).abs() <= 1e-10 * p.abs().max(1.0)) {
                return Err(Error::InvalidParameter(format!(
                    "profile is not sqrt(-u^2 + 2au + b) for a = {a}, b = {b}: f({u})^2 = {}",
                    f * f
                )));
            }
        }
        Ok(Self {
            surface,
            u_map: UMap::ArcSine { a, r: r2.sqrt() },
            scale: 1.0,
        })
    }

    /// Rescales both barred coordinates by `s > 0`.
    pub fn with_scale(mut self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter(format!("chart scale must be positive, got {s}")));
        }
        self.scale = s;
        Ok(self)
    }

    pub fn surface(&self) -> &MeridianSurface {
        &self.surface
    }

    pub fn u_map(&self) -> UMap {
        self.u_map
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn check_u(&self, u: f64) -> Result<()> {
        if self.surface.profile().interval().contains_closed(u) {
            Ok(())
        } else {
            Err(Error::ChartDomain(u))
        }
    }

    /// `f(u)` and `f'(u)`.
    fn f_pair(&self, u: f64) -> Result<(f64, f64)> {
        self.check_u(u)?;
        let j = self.surface.profile().f_jet(u)?;
        Ok((j.value(), j.d1()))
    }

    pub fn big_u(&self, u: f64) -> Result<f64> {
        self.check_u(u)?;
        match self.u_map {
            UMap::ArcSine { a, r } => Ok(((u - a) / r).asin()),
            UMap::Quadrature { base } => integrate_values(
                |t| {
                    let f = self.surface.profile().f_jet(t)?.value();
                    Ok(1.0 / f)
                },
                base,
                u,
                U_QUADRATURE_TOL,
            ),
        }
    }

    /// `(ubar, vbar)`.
    pub fn coordinates(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        let big_u = self.big_u(u)?;
        let k = self.scale / SQRT_2;
        Ok((k * (big_u + v), k * (big_u - v)))
    }

    /// `(z_ubar, z_vbar)`.
    pub fn tangents(&self, u: f64, v: f64) -> Result<(Vec4M, Vec4M)> {
        self.check_u(u)?;
        let jet = self.surface.evaluate(u, v)?;
        let f = self.surface.profile().f_jet(u)?.value();
        let k = 1.0 / (SQRT_2 * self.scale);
        Ok(((jet.z_u * f + jet.z_v) * k, (jet.z_u * f - jet.z_v) * k))
    }

    /// Barred partials of a field whose `(u, v)` partials at `u` are `p`.
    pub fn barred(&self, u: f64, p: &Partials2) -> Result<BarredPartials> {
        let (f, fd) = self.f_pair(u)?;
        let k = 1.0 / (SQRT_2 * self.scale);
        Ok(BarredPartials {
            value: p.value,
            ubar: (f * p.u + p.v) * k,
            vbar: (f * p.u - p.v) * k,
            ubar_vbar: (f * fd * p.u + f * f * p.uu - p.vv) / (2.0 * self.scale * self.scale),
        })
    }

    /// `(u, v)` partials of `ubar` and `vbar` themselves at `u`.
    pub fn coordinate_partials(&self, u: f64, v: f64) -> Result<(Partials2, Partials2)> {
        let (f, fd) = self.f_pair(u)?;
        let (ub, vb) = self.coordinates(u, v)?;
        let k = self.scale / SQRT_2;
        let (du, duu) = (k / f, -k * fd / (f * f));
        Ok((
            Partials2 {
                value: ub,
                u: du,
                v: k,
                uu: duu,
                uv: 0.0,
                vv: 0.0,
            },
            Partials2 {
                value: vb,
                u: du,
                v: -k,
                uu: duu,
                uv: 0.0,
                vv: 0.0,
            },
        ))
    }
}
