//! Meridian profiles `u -> (f(u), g(u))` with `f'^2 - g'^2 = -1`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diffkit::{integrate_values, Interval, Jet3, OdeSolution, SmoothFn1, StopEvent};
use crate::{Error, Result};

/// A sign branch, encoded as `1` or `-1` in JSON.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be 1 or -1, got {other}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// `f` and `g` jets at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileJet {
    pub f: Jet3,
    pub g: Jet3,
}

impl ProfileJet {
    /// `f'^2 - g'^2 + 1`.
    pub fn constraint_residual(&self) -> f64 {
        self.f.d1() * self.f.d1() - self.g.d1() * self.g.d1() + 1.0
    }
}

#[derive(Clone)]
enum GSource {
    /// `g` given in closed form, with its own jets.
    Closed(SmoothFn1),
    /// `g = sign * int_{base}^{u} sqrt(f'^2 + 1)`, by adaptive quadrature.
    Quadrature { sign: Sign, base: f64 },
    /// `g = sign * arc(u)`, integrated alongside the profile ODE.
    Ode { sign: Sign, solution: Arc<OdeSolution> },
}

const CONSTRAINT_TOL: f64 = 1e-10;
const QUADRATURE_TOL: f64 = 1e-12;
const VALIDATION_SAMPLES: usize = 33;

/// The meridian curve of a meridian surface.
#[derive(Clone)]
pub struct MeridianProfile {
    name: String,
    interval: Interval,
    f: SmoothFn1,
    g: GSource,
    stop: Option<StopEvent>,
}

impl fmt::Debug for MeridianProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeridianProfile")
            .field("name", &self.name)
            .field("interval", &self.interval)
            .field("stop", &self.stop)
            .finish()
    }
}

impl MeridianProfile {
    /// A profile with closed-form `f` and `g`.
    pub fn from_closed_form(
        name: impl Into<String>,
        interval: (f64, f64),
        f: SmoothFn1,
        g: SmoothFn1,
    ) -> Result<Self> {
        Self::build(name.into(), interval, f, GSource::Closed(g), None)
    }

    /// A profile with closed-form `f`; `g` is integrated from `g' = sign sqrt(f'^2 + 1)`
    /// with `g(interval.0) = 0`.
    pub fn from_f_with_quadrature(
        name: impl Into<String>,
        interval: (f64, f64),
        f: SmoothFn1,
        sign: Sign,
    ) -> Result<Self> {
        let base = interval.0;
        Self::build(name.into(), interval, f, GSource::Quadrature { sign, base }, None)
    }

    /// A profile from an integrated `f' = phi(f)`; `g` is the integrated arc
    /// `int sqrt(f'^2 + 1)` with the chosen sign and `g(u0) = 0`.
    ///
    /// After an early stop the interval is the part that was covered and the
    /// event is kept in [`MeridianProfile::stop`].
    pub fn from_ode(name: impl Into<String>, solution: OdeSolution, sign: Sign) -> Result<Self> {
        let covered = solution.covered();
        let (u0, u1) = solution.requested_range();
        let hi = u1.min(covered.hi);
        if !(hi > u0) {
            return Err(Error::EmptyInterval(format!(
                "profile ODE covers only [{u0}, {hi}]"
            )));
        }
        let solution = Arc::new(solution);
        let stop = solution.stop().cloned();
        let slack = 1e-12 * (1.0 + covered.lo.abs().max(covered.hi.abs()));
        let domain = Interval::new(covered.lo - slack, covered.hi + slack);
        let sol = Arc::clone(&solution);
        let f = SmoothFn1::new(format!("ODE {}", solution.phi().name()), domain, move |x| {
            match sol.eval(x.value()) {
                Ok(jet) => x.compose(jet),
                Err(_) => Jet3::constant(f64::NAN),
            }
        });
        Self::build(name.into(), (u0, hi), f, GSource::Ode { sign, solution }, stop)
    }

    fn build(
        name: String,
        (lo, hi): (f64, f64),
        f: SmoothFn1,
        g: GSource,
        stop: Option<StopEvent>,
    ) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::EmptyInterval(format!("[{lo}, {hi}]")));
        }
        let dom = f.domain();
        if !dom.contains(lo) || !dom.contains(hi) {
            return Err(Error::IntervalOutsideDomain {
                a: lo,
                b: hi,
                domain: format!("{dom} of {}", f.name()),
            });
        }
        let profile = Self {
            name,
            interval: Interval::new(lo, hi),
            f,
            g,
            stop,
        };
        profile.validate()?;
        Ok(profile)
    }

    fn validate(&self) -> Result<()> {
        let Interval { lo, hi } = self.interval;
        for i in 0..VALIDATION_SAMPLES {
            let u = crate::grid::linspace(lo, hi, VALIDATION_SAMPLES, i);
            let f = self.f_jet(u)?;
            if !(f.value() > 0.0) {
                return Err(Error::NonpositiveProfile(format!(
                    "{}: f({u}) = {}",
                    self.name,
                    f.value()
                )));
            }
            let jet = self.eval(u)?;
            let scale = 1.0_f64.max(jet.g.d1() * jet.g.d1());
            let r = jet.constraint_residual();
            if !(r.abs() <= CONSTRAINT_TOL * scale) {
                return Err(Error::InvalidProfile(format!(
                    "{}: f'^2 - g'^2 + 1 = {r:e} at u = {u}",
                    self.name
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Closed parameter range `I`.
    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn f_fn(&self) -> &SmoothFn1 {
        &self.f
    }

    /// The early-stop event of an ODE profile, if integration ended before the requested range.
    pub fn stop(&self) -> Option<&StopEvent> {
        self.stop.as_ref()
    }

    /// Sign of `g'`.
    pub fn g_sign(&self) -> Sign {
        match &self.g {
            GSource::Closed(g) => {
                let mid = 0.5 * (self.interval.lo + self.interval.hi);
                match g.eval(mid) {
                    Ok(j) if j.d1() < 0.0 => Sign::Minus,
                    _ => Sign::Plus,
                }
            }
            GSource::Quadrature { sign, .. } | GSource::Ode { sign, .. } => *sign,
        }
    }

    fn check_domain(&self, u: f64) -> Result<()> {
        if self.interval.contains_closed(u) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                what: "u",
                value: u,
                domain: format!("[{}, {}]", self.interval.lo, self.interval.hi),
            })
        }
    }

    pub fn f_jet(&self, u: f64) -> Result<Jet3> {
        self.check_domain(u)?;
        self.f.eval(u)
    }

    pub fn eval(&self, u: f64) -> Result<ProfileJet> {
        let f = self.f_jet(u)?;
        let g = match &self.g {
            GSource::Closed(g) => g.eval(u)?,
            GSource::Quadrature { sign, base } => {
                let value = integrate_values(
                    |x| Ok(self.f.eval(x)?.d1().hypot(1.0)),
                    *base,
                    u,
                    QUADRATURE_TOL,
                )?;
                g_jet_from_f(&f, sign.value() * value, *sign)
            }
            GSource::Ode { sign, solution } => {
                let (_, arc) = solution.state_at(u)?;
                g_jet_from_f(&f, sign.value() * arc, *sign)
            }
        };
        Ok(ProfileJet { f, g })
    }
}

/// Jets of `g` from `g' = sign sqrt(f'^2 + 1)`: `g'' = f' f'' / g'` and
/// `g''' = (f''^2 + f' f''' - g''^2) / g'`.
pub fn g_jet_from_f(f: &Jet3, g_value: f64, sign: Sign) -> Jet3 {
    let (f1, f2, f3) = (f.d1(), f.d2(), f.d3());
    let g1 = sign.value() * f1.hypot(1.0);
    let g2 = f1 * f2 / g1;
    let g3 = (f2 * f2 + f1 * f3 - g2 * g2) / g1;
    Jet3::new(g_value, g1, g2, g3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffkit::{central_5pt, integrate_profile};

    fn unit_disc_profile() -> MeridianProfile {
        let f = SmoothFn1::new("sqrt(1-u^2)", Interval::new(-1.0, 1.0), |u| {
            (Jet3::constant(1.0) - u * u).sqrt()
        });
        let g = SmoothFn1::new("asin", Interval::new(-1.0, 1.0), |u| u.asin());
        MeridianProfile::from_closed_form("unit disc", (-0.9, 0.9), f, g).unwrap()
    }

    #[test]
    fn g_jets_match_closed_form() {
        let p = unit_disc_profile();
        for u in [-0.5, 0.0, 0.3, 0.8] {
            let jet = p.eval(u).unwrap();
            let derived = g_jet_from_f(&jet.f, jet.g.value(), Sign::Plus);
            for k in 0..4 {
                assert!((derived.deriv(k) - jet.g.deriv(k)).abs() < 1e-12, "u {u} k {k}");
            }
            assert!(jet.constraint_residual().abs() < 1e-12);
        }
        assert!(matches!(p.eval(0.95), Err(Error::OutOfDomain { .. })));
        assert_eq!(p.g_sign(), Sign::Plus);
    }

    #[test]
    fn quadrature_g_differentiates_to_g_prime() {
        let f = SmoothFn1::new("cosh", Interval::REAL_LINE, |u| u.cosh());
        let p = MeridianProfile::from_f_with_quadrature("cosh", (-1.0, 1.0), f, Sign::Minus).unwrap();
        let h = 1e-3;
        let g = |u: f64| p.eval(u).unwrap().g.value();
        for u in [-0.5, 0.1, 0.7] {
            let fd = central_5pt(g(u - 2.0 * h), g(u - h), g(u + h), g(u + 2.0 * h), h);
            let jet = p.eval(u).unwrap();
            assert!((fd - jet.g.d1()).abs() < 1e-9, "u {u}: {fd} vs {}", jet.g.d1());
            assert!(jet.g.d1() < 0.0);
        }
        // g' = -cosh u here, so g = -(sinh u - sinh(-1))
        let expected = -(0.3f64.sinh() + 1f64.sinh());
        assert!((g(0.3) - expected).abs() < 1e-10);
    }

    #[test]
    fn ode_profile_and_arc() {
        let phi = SmoothFn1::new("sqrt(t^2-1)", Interval::new(1.0, f64::INFINITY), |t| {
            (t * t - 1.0).sqrt()
        });
        let sol = integrate_profile(&phi, 0.1f64.cosh(), (0.0, 1.0), 1e-3).unwrap();
        let p = MeridianProfile::from_ode("cosh", sol, Sign::Plus).unwrap();
        for u in [0.0, 0.25, 0.5004, 1.0] {
            let jet = p.eval(u).unwrap();
            assert!((jet.f.value() - (u + 0.1).cosh()).abs() < 1e-8);
            // arc of cosh is sinh
            let arc = (u + 0.1).sinh() - 0.1f64.sinh();
            assert!((jet.g.value() - arc).abs() < 1e-8);
            assert!(jet.constraint_residual().abs() < 1e-12);
        }
        assert!(p.stop().is_none());
    }

    #[test]
    fn early_stop_shrinks_the_interval() {
        let phi = SmoothFn1::new("t^2", Interval::new(0.0, f64::INFINITY), |t| t * t);
        let sol = crate::diffkit::integrate_profile_with_bound(&phi, 1.0, (0.0, 2.0), 1e-3, 1e6)
            .unwrap();
        let p = MeridianProfile::from_ode("blow-up", sol, Sign::Plus).unwrap();
        assert!(p.stop().is_some());
        assert!(p.interval().hi < 1.0);
        assert!(p.eval(1.5).is_err());
    }

    #[test]
    fn nonpositive_profile_is_rejected() {
        let f = SmoothFn1::polynomial(vec![0.5, 1.0]);
        let g = SmoothFn1::polynomial(vec![0.0, 2f64.sqrt()]);
        let err = MeridianProfile::from_closed_form("line", (-1.0, 1.0), f, g).unwrap_err();
        assert!(matches!(err, Error::NonpositiveProfile(_)));
    }

    #[test]
    fn constraint_violation_is_rejected() {
        let f = SmoothFn1::polynomial(vec![1.0, 1.0]);
        let g = SmoothFn1::polynomial(vec![0.0, 1.0]);
        let err = MeridianProfile::from_closed_form("bad", (0.0, 1.0), f, g).unwrap_err();
        assert!(matches!(err, Error::InvalidProfile(_)));
    }

    #[test]
    fn sign_json() {
        assert_eq!(serde_json::to_string(&Sign::Minus).unwrap(), "-1");
        assert_eq!(serde_json::from_str::<Sign>("1").unwrap(), Sign::Plus);
        assert!(serde_json::from_str::<Sign>("2").is_err());
    }
}
