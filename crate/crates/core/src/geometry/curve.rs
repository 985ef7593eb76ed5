//! Arc-length curves on the unit sphere of `span{e1, e2, e3}`.

use std::fmt;
use std::sync::Arc;

use crate::diffkit::{Interval, Jet3, SmoothFn1};
use crate::minkowski::Vec4M;
use crate::{Error, Result};

/// `l, l', l'', l'''` at a parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub l: [Vec4M; 4],
}

impl CurveJet {
    pub fn position(&self) -> Vec4M {
        self.l[0]
    }

    /// `t = l'`.
    pub fn tangent(&self) -> Vec4M {
        self.l[1]
    }

    /// `n = l x t`.
    pub fn normal(&self) -> Vec4M {
        self.l[0].cross3(self.l[1])
    }

    /// `n' = l x l''` (the `l' x l'` term vanishes).
    pub fn normal_d1(&self) -> Vec4M {
        self.l[0].cross3(self.l[2])
    }

    /// `n'' = l' x l'' + l x l'''`.
    pub fn normal_d2(&self) -> Vec4M {
        self.l[1].cross3(self.l[2]) + self.l[0].cross3(self.l[3])
    }
}

type CurveFn = dyn Fn(f64) -> Result<CurveJet> + Send + Sync;

/// Sample count used by the load-time validation of a curve.
const VALIDATION_SAMPLES: usize = 33;
const UNIT_TOL: f64 = 1e-10;
const FRENET_TOL: f64 = 1e-8;

/// A directrix `l(v)` on `S^2(1)`, parametrized by arc length, with its
/// spherical curvature `kappa(v) = <t', n>`.
#[derive(Clone)]
pub struct SphericalCurve {
    name: String,
    eval: Arc<CurveFn>,
    kappa: SmoothFn1,
    interval: Interval,
    constant_kappa: Option<f64>,
}

impl fmt::Debug for SphericalCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SphericalCurve")
            .field("name", &self.name)
            .field("interval", &self.interval)
            .field("constant_kappa", &self.constant_kappa)
            .finish()
    }
}

impl SphericalCurve {
    /// A curve from user-supplied jets and curvature. The sphere, arc-length
    /// and Frenet relations are checked on a sample of the interval.
    pub fn custom(
        name: impl Into<String>,
        interval: Interval,
        kappa: SmoothFn1,
        eval: impl Fn(f64) -> Result<CurveJet> + Send + Sync + 'static,
    ) -> Result<Self> {
        let curve = Self {
            name: name.into(),
            eval: Arc::new(eval),
            kappa,
            interval,
            constant_kappa: None,
        };
        curve.validate()?;
        Ok(curve)
    }

    /// `l(v) = (cos v, sin v, 0)`, `kappa = 0`.
    pub fn great_circle() -> Self {
        let mut c = Self::custom(
            "great circle",
            Interval::REAL_LINE,
            SmoothFn1::constant(0.0),
            |v| {
                let (s, c) = v.sin_cos();
                Ok(CurveJet {
                    l: [
                        Vec4M::spatial(c, s, 0.0),
                        Vec4M::spatial(-s, c, 0.0),
                        Vec4M::spatial(-c, -s, 0.0),
                        Vec4M::spatial(s, -c, 0.0),
                    ],
                })
            },
        )
        .expect("great circle is a valid spherical curve");
        c.constant_kappa = Some(0.0);
        c
    }

    /// Circle at colatitude `alpha`, arc-length parametrized:
    /// `l(v) = (sin a cos(v / sin a), sin a sin(v / sin a), cos a)`.
    ///
    /// The curvature is read off the jets as `<l'', l x l'>`.
    pub fn latitude(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
            return Err(Error::InvalidCurve(format!(
                "colatitude {alpha} must lie in (0, pi)"
            )));
        }
        let (sa, ca) = alpha.sin_cos();
        let jets = move |v: f64| {
            let (s, c) = (v / sa).sin_cos();
            CurveJet {
                l: [
                    Vec4M::spatial(sa * c, sa * s, ca),
                    Vec4M::spatial(-s, c, 0.0),
                    Vec4M::spatial(-c / sa, -s / sa, 0.0),
                    Vec4M::spatial(s / (sa * sa), -c / (sa * sa), 0.0),
                ],
            }
        };
        let j0 = jets(0.0);
        let k = j0.l[2].dot(j0.normal());
        let mut curve = Self::custom(
            format!("latitude circle alpha={alpha}"),
            Interval::REAL_LINE,
            SmoothFn1::constant(k),
            move |v| Ok(jets(v)),
        )?;
        curve.constant_kappa = Some(k);
        Ok(curve)
    }

    /// The latitude circle whose spherical curvature is `kappa`; a great circle for `kappa = 0`.
    pub fn with_constant_curvature(kappa: f64) -> Result<Self> {
        if kappa == 0.0 {
            return Ok(Self::great_circle());
        }
        // kappa = cot(alpha) for the orientation n = l x t
        Self::latitude(f64::atan2(1.0, kappa))
    }

    /// Integrates the spherical Frenet system `l' = t, t' = kappa n - l,
    /// n' = -kappa t` from `l = e1, t = e2, n = e3` at `v_range.0` with RK4 step `h`.
    pub fn from_curvature(kappa: SmoothFn1, v_range: (f64, f64), h: f64) -> Result<Self> {
        let (v0, v1) = v_range;
        if !(h > 0.0) {
            return Err(Error::StepSizeNonpositive(h));
        }
        if !(v1 > v0) {
            return Err(Error::EmptyInterval(format!("[{v0}, {v1}]")));
        }
        let dom = kappa.domain();
        if !dom.contains(v0) || !dom.contains(v1) {
            return Err(Error::IntervalOutsideDomain {
                a: v0,
                b: v1,
                domain: dom.to_string(),
            });
        }
        let frames = FrenetTable::integrate(&kappa, v0, v1, h)?;
        let name = format!("directrix with kappa = {}", kappa.name());
        let k2 = kappa.clone();
        Self::custom(name, Interval::new(v0, v1), kappa, move |v| frames.jet(&k2, v))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// `Some(kappa)` for the built-in circles.
    pub fn constant_curvature(&self) -> Option<f64> {
        self.constant_kappa
    }

    pub fn kappa_fn(&self) -> &SmoothFn1 {
        &self.kappa
    }

    fn check_domain(&self, v: f64) -> Result<()> {
        if self.interval.contains_closed(v) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                what: "v",
                value: v,
                domain: self.interval.to_string(),
            })
        }
    }

    pub fn jets(&self, v: f64) -> Result<CurveJet> {
        self.check_domain(v)?;
        (self.eval)(v)
    }

    /// `kappa(v)` with its first three derivatives.
    pub fn kappa(&self, v: f64) -> Result<Jet3> {
        self.check_domain(v)?;
        match self.constant_kappa {
            Some(k) => Ok(Jet3::constant(k)),
            None => self.kappa.eval(v),
        }
    }

    /// Orthonormal frame `(l, t, n)`.
    pub fn frame(&self, v: f64) -> Result<(Vec4M, Vec4M, Vec4M)> {
        let j = self.jets(v)?;
        Ok((j.position(), j.tangent(), j.normal()))
    }

    fn validate(&self) -> Result<()> {
        let iv = self.interval;
        let (lo, hi) = if iv.lo.is_finite() && iv.hi.is_finite() {
            (iv.lo, iv.hi)
        } else {
            (-3.0, 3.0)
        };
        for i in 0..VALIDATION_SAMPLES {
            let v = crate::grid::linspace(lo, hi, VALIDATION_SAMPLES, i);
            let j = (self.eval)(v)?;
            let k = if let Some(k) = self.constant_kappa {
                k
            } else {
                self.kappa.eval(v)?.value()
            };
            let checks = [
                ("<l,l> = 1", (j.l[0].norm_sq() - 1.0).abs(), UNIT_TOL),
                ("<l',l'> = 1", (j.l[1].norm_sq() - 1.0).abs(), UNIT_TOL),
                ("spatial", j.l.iter().map(|x| x.x4.abs()).fold(0.0, f64::max), 0.0),
                (
                    "t' = kappa n - l",
                    (j.l[2] - (j.normal() * k - j.l[0])).max_abs(),
                    FRENET_TOL,
                ),
                (
                    "n' = -kappa t",
                    (j.normal_d1() + j.l[1] * k).max_abs(),
                    FRENET_TOL,
                ),
            ];
            for (label, dev, tol) in checks {
                if !(dev <= tol) {
                    return Err(Error::InvalidCurve(format!(
                        "{}: {label} violated by {dev:e} at v = {v}",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Frenet frames `(l, t, n)` on a uniform grid, from RK4.
struct FrenetTable {
    v0: f64,
    h: f64,
    frames: Vec<[Vec4M; 3]>,
}

impl FrenetTable {
    fn rhs(kappa: f64, fr: &[Vec4M; 3]) -> [Vec4M; 3] {
        let [l, t, n] = *fr;
        [t, n * kappa - l, -(t * kappa)]
    }

    fn step(kappa: &SmoothFn1, v: f64, fr: &[Vec4M; 3], h: f64) -> Result<[Vec4M; 3]> {
        let add = |a: &[Vec4M; 3], b: &[Vec4M; 3], s: f64| [a[0] + b[0] * s, a[1] + b[1] * s, a[2] + b[2] * s];
        let k1 = Self::rhs(kappa.value(v)?, fr);
        let k2 = Self::rhs(kappa.value(v + 0.5 * h)?, &add(fr, &k1, 0.5 * h));
        let k3 = Self::rhs(kappa.value(v + 0.5 * h)?, &add(fr, &k2, 0.5 * h));
        let k4 = Self::rhs(kappa.value(v + h)?, &add(fr, &k3, h));
        let mut out = *fr;
        for i in 0..3 {
            out[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
        }
        Ok(out)
    }

    fn integrate(kappa: &SmoothFn1, v0: f64, v1: f64, h: f64) -> Result<Self> {
        let steps = ((v1 - v0) / h).ceil() as usize;
        // the last step lands exactly on v1
        let h = (v1 - v0) / steps as f64;
        let mut frames = Vec::with_capacity(steps + 1);
        let mut fr = [Vec4M::E1, Vec4M::E2, Vec4M::E3];
        frames.push(fr);
        for k in 0..steps {
            fr = Self::step(kappa, v0 + k as f64 * h, &fr, h)?;
            frames.push(fr);
        }
        Ok(Self { v0, h, frames })
    }

    fn jet(&self, kappa: &SmoothFn1, v: f64) -> Result<CurveJet> {
        let k = (((v - self.v0) / self.h).floor().max(0.0) as usize).min(self.frames.len() - 1);
        let start = self.v0 + k as f64 * self.h;
        let dv = v - start;
        let [l, t, n] = if dv == 0.0 {
            self.frames[k]
        } else {
            Self::step(kappa, start, &self.frames[k], dv)?
        };
        let kj = kappa.eval(v)?;
        let (k0, k1) = (kj.value(), kj.d1());
        Ok(CurveJet {
            l: [l, t, n * k0 - l, n * k1 - t * (k0 * k0 + 1.0)],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffkit::central_5pt;

    /// Spherical curvature from finite differences of positions only.
    fn fd_curvature(curve: &SphericalCurve, v: f64) -> f64 {
        let h = 1e-3;
        let pos = |s: f64| curve.jets(s).unwrap().position();
        let d = |f: &dyn Fn(f64) -> Vec4M, s: f64| -> Vec4M {
            let (m2, m1, p1, p2) = (f(s - 2.0 * h), f(s - h), f(s + h), f(s + 2.0 * h));
            Vec4M::new(
                central_5pt(m2.x1, m1.x1, p1.x1, p2.x1, h),
                central_5pt(m2.x2, m1.x2, p1.x2, p2.x2, h),
                central_5pt(m2.x3, m1.x3, p1.x3, p2.x3, h),
                0.0,
            )
        };
        let t = |s: f64| d(&pos, s);
        let tp = d(&t, v);
        tp.dot(pos(v).cross3(t(v)))
    }

    #[test]
    fn great_circle_is_flat() {
        let c = SphericalCurve::great_circle();
        assert_eq!(c.kappa(1.0).unwrap().value(), 0.0);
        assert!(fd_curvature(&c, 0.4).abs() < 1e-8);
    }

    #[test]
    fn latitude_curvature_matches_finite_differences() {
        for alpha in [0.3, 1.0, 1.2, 2.5] {
            let c = SphericalCurve::latitude(alpha).unwrap();
            let k = c.kappa(0.0).unwrap().value();
            assert!((k - 1.0 / alpha.tan()).abs() < 1e-12);
            for v in [-1.0, 0.2, 0.9] {
                assert!((fd_curvature(&c, v) - k).abs() < 1e-6, "alpha {alpha} v {v}");
            }
        }
        let c = SphericalCurve::with_constant_curvature(2.0).unwrap();
        assert!((c.kappa(0.0).unwrap().value() - 2.0).abs() < 1e-12);
        let c = SphericalCurve::with_constant_curvature(-1.5).unwrap();
        assert!((c.kappa(0.0).unwrap().value() + 1.5).abs() < 1e-12);
    }

    #[test]
    fn frenet_integrated_curve() {
        let kappa = SmoothFn1::sin_offset(2.0);
        let c = SphericalCurve::from_curvature(kappa, (-0.5, 7.0), 1e-3).unwrap();
        for v in [0.0, 0.37, 3.0, 6.9] {
            let fd = fd_curvature(&c, v);
            assert!((fd - (2.0 + v.sin())).abs() < 1e-6, "v {v}: {fd}");
            let j = c.jets(v).unwrap();
            assert!((j.position().norm_sq() - 1.0).abs() < 1e-10);
        }
        assert!(c.jets(7.5).is_err());
    }

    #[test]
    fn invalid_custom_curve_is_rejected() {
        // not arc-length: speed 2
        let err = SphericalCurve::custom(
            "fast circle",
            Interval::REAL_LINE,
            SmoothFn1::constant(0.0),
            |v| {
                let (s, c) = (2.0 * v).sin_cos();
                Ok(CurveJet {
                    l: [
                        Vec4M::spatial(c, s, 0.0),
                        Vec4M::spatial(-2.0 * s, 2.0 * c, 0.0),
                        Vec4M::spatial(-4.0 * c, -4.0 * s, 0.0),
                        Vec4M::spatial(8.0 * s, -8.0 * c, 0.0),
                    ],
                })
            },
        );
        assert!(matches!(err, Err(Error::InvalidCurve(_))));
    }
}
