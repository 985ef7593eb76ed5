//! Fixed-step RK4 for autonomous profile equations `f' = phi(f)`.

use serde::{Deserialize, Serialize};

use super::jet::Jet3;
use super::smooth::{Interval, SmoothFn1};
use crate::{Error, Result};

/// Early stop bound on `|phi|`.
pub const DEFAULT_OVERFLOW_BOUND: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StopReason {
    /// The state left the validity region of `phi`.
    LeftDomain,
    /// `|phi|` exceeded the overflow bound.
    Overflow,
}

/// Where and why integration stopped before the requested end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StopEvent {
    /// Last node that was accepted.
    pub u: f64,
    pub reason: StopReason,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeNode {
    pub u: f64,
    pub f: Jet3,
    /// `int_{u0}^{u} sqrt(f'^2 + 1) du`, integrated alongside `f`.
    pub arc: f64,
}

/// A profile `f(u)` sampled on a uniform grid, with jets taken from the ODE.
#[derive(Debug, Clone)]
pub struct OdeSolution {
    phi: SmoothFn1,
    h: f64,
    nodes: Vec<OdeNode>,
    requested: (f64, f64),
    stop: Option<StopEvent>,
    overflow_bound: f64,
}

/// Jets of `f` at a point where `f = value`, derived from `f' = phi(f)`:
/// `f'' = phi' phi`, `f''' = (phi'' phi + phi'^2) phi`.
pub fn profile_jet_from_phi(phi: &SmoothFn1, value: f64) -> Result<Jet3> {
    let p = phi.eval(value)?;
    let (p0, p1, p2) = (p.value(), p.d1(), p.d2());
    Ok(Jet3::new(value, p0, p1 * p0, (p2 * p0 + p1 * p1) * p0))
}

struct Rhs<'a> {
    phi: &'a SmoothFn1,
    bound: f64,
}

impl Rhs<'_> {
    fn eval(&self, f: f64) -> std::result::Result<(f64, f64), StopReason> {
        let p = self.phi.value(f).map_err(|_| StopReason::LeftDomain)?;
        if p.abs() > self.bound {
            return Err(StopReason::Overflow);
        }
        Ok((p, (p * p + 1.0).sqrt()))
    }

    fn step(&self, f: f64, arc: f64, h: f64) -> std::result::Result<(f64, f64), StopReason> {
        let k1 = self.eval(f)?;
        let k2 = self.eval(f + 0.5 * h * k1.0)?;
        let k3 = self.eval(f + 0.5 * h * k2.0)?;
        let k4 = self.eval(f + h * k3.0)?;
        let f_next = f + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        let arc_next = arc + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        // validity of the landing point is part of the step
        self.eval(f_next)?;
        Ok((f_next, arc_next))
    }
}

/// Integrates `f' = phi(f)`, `f(u0) = f0` over `u_range` with step `h`.
///
/// The node grid is `u0 + k h` and covers `u_range.1` (the last node may lie
/// up to one step beyond it). Leaving the domain of `phi` or exceeding
/// [`DEFAULT_OVERFLOW_BOUND`] ends the integration early; the partial solution
/// is returned with [`OdeSolution::stop`] set.
pub fn integrate_profile(
    phi: &SmoothFn1,
    f0: f64,
    u_range: (f64, f64),
    h: f64,
) -> Result<OdeSolution> {
    integrate_profile_with_bound(phi, f0, u_range, h, DEFAULT_OVERFLOW_BOUND)
}

pub fn integrate_profile_with_bound(
    phi: &SmoothFn1,
    f0: f64,
    u_range: (f64, f64),
    h: f64,
    overflow_bound: f64,
) -> Result<OdeSolution> {
    if !(h > 0.0) {
        return Err(Error::StepSizeNonpositive(h));
    }
    let (u0, u1) = u_range;
    if !(u1 >= u0) {
        return Err(Error::EmptyInterval(format!("[{u0}, {u1}]")));
    }
    let rhs = Rhs {
        phi,
        bound: overflow_bound,
    };
    if rhs.eval(f0).is_err() {
        return Err(Error::InvalidInitialState(f0));
    }

    let steps = ((u1 - u0) / h - 1e-9).ceil().max(0.0) as usize;
    let mut nodes = Vec::with_capacity(steps + 1);
    nodes.push(OdeNode {
        u: u0,
        f: profile_jet_from_phi(phi, f0)?,
        arc: 0.0,
    });
    let mut stop = None;
    let (mut f, mut arc) = (f0, 0.0);
    for k in 1..=steps {
        match rhs.step(f, arc, h) {
            Ok((fn_, an)) => {
                f = fn_;
                arc = an;
                nodes.push(OdeNode {
                    u: u0 + k as f64 * h,
                    f: profile_jet_from_phi(phi, f)?,
                    arc,
                });
            }
            Err(reason) => {
                stop = Some(StopEvent {
                    u: u0 + (k - 1) as f64 * h,
                    reason,
                });
                break;
            }
        }
    }

    Ok(OdeSolution {
        phi: phi.clone(),
        h,
        nodes,
        requested: u_range,
        stop,
        overflow_bound,
    })
}

impl OdeSolution {
    pub fn phi(&self) -> &SmoothFn1 {
        &self.phi
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[OdeNode] {
        &self.nodes
    }

    pub fn stop(&self) -> Option<&StopEvent> {
        self.stop.as_ref()
    }

    pub fn requested_range(&self) -> (f64, f64) {
        self.requested
    }

    /// `[first node, last node]`; shorter than requested after an early stop.
    pub fn covered(&self) -> Interval {
        let last = self.nodes.last().expect("at least the initial node").u;
        Interval::new(self.nodes[0].u, last)
    }

    /// Value of `f` and the arc integral at any `u` in the covered range, by a
    /// single RK4 sub-step from the nearest node at or below `u`.
    pub fn state_at(&self, u: f64) -> Result<(f64, f64)> {
        let covered = self.covered();
        // tolerate rounding at the ends of the grid
        let slack = 1e-12 * (1.0 + u.abs());
        if !(u >= covered.lo - slack && u <= covered.hi + slack) {
            return Err(Error::OutOfDomain {
                what: "u",
                value: u,
                domain: format!("[{}, {}] covered by the profile ODE", covered.lo, covered.hi),
            });
        }
        let u0 = self.nodes[0].u;
        let k = (((u - u0) / self.h).floor().max(0.0) as usize).min(self.nodes.len() - 1);
        let node = &self.nodes[k];
        let du = u - node.u;
        if du == 0.0 {
            return Ok((node.f.value(), node.arc));
        }
        let rhs = Rhs {
            phi: &self.phi,
            bound: self.overflow_bound,
        };
        rhs.step(node.f.value(), node.arc, du).map_err(|_| Error::OutOfDomain {
            what: "u",
            value: u,
            domain: "region where the profile ODE is defined".into(),
        })
    }

    /// Jet of `f` at `u`.
    pub fn eval(&self, u: f64) -> Result<Jet3> {
        let (f, _) = self.state_at(u)?;
        profile_jet_from_phi(&self.phi, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cosh_phi() -> SmoothFn1 {
        SmoothFn1::new("sqrt(t^2-1)", Interval::new(1.0, f64::INFINITY), |t| {
            (t * t - 1.0).sqrt()
        })
    }

    fn cosh_error(h: f64) -> f64 {
        let sol = integrate_profile(&cosh_phi(), 0.1f64.cosh(), (0.0, 1.0), h).unwrap();
        let last = sol.nodes().last().unwrap();
        (last.f.value() - (last.u + 0.1).cosh()).abs()
    }

    #[test]
    fn cosh_oracle() {
        let sol = integrate_profile(&cosh_phi(), 0.1f64.cosh(), (0.0, 1.0), 1e-3).unwrap();
        assert!(sol.stop().is_none());
        let worst = sol
            .nodes()
            .iter()
            .map(|n| (n.f.value() - (n.u + 0.1).cosh()).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-8, "max error {worst}");
        // off-node evaluation
        let u = 0.123_456_7;
        assert!((sol.eval(u).unwrap().value() - (u + 0.1).cosh()).abs() <= 1e-8);
    }

    #[test]
    fn fourth_order_convergence() {
        let e1 = cosh_error(1e-3);
        let e2 = cosh_error(5e-4);
        assert!(e1 / e2 >= 8.0, "ratio {}", e1 / e2);
        assert!((e1 / e2).log2() >= 3.9);
    }

    #[test]
    fn fixed_point() {
        let sol = integrate_profile(&SmoothFn1::constant(0.0), 2.0, (0.0, 1.0), 0.1).unwrap();
        assert!(sol.nodes().iter().all(|n| n.f.value() == 2.0));
        assert_eq!(sol.nodes().len(), 11);
    }

    #[test]
    fn exponential() {
        let phi = SmoothFn1::new("t", Interval::REAL_LINE, |t| t);
        let sol = integrate_profile(&phi, 1.0, (0.0, 1.0), 1e-3).unwrap();
        let last = sol.nodes().last().unwrap();
        assert!((last.u - 1.0).abs() < 1e-12);
        assert!((last.f.value() - std::f64::consts::E).abs() <= 1e-9);
    }

    #[test]
    fn jets_follow_the_chain_rule() {
        let phi = cosh_phi();
        let sol = integrate_profile(&phi, 1.2, (0.0, 0.5), 0.01).unwrap();
        for node in sol.nodes() {
            // recomputation is bit-stable
            assert_eq!(node.f, profile_jet_from_phi(&phi, node.f.value()).unwrap());
            let p = phi.eval(node.f.value()).unwrap();
            let (p0, p1, p2) = (p.value(), p.d1(), p.d2());
            let close = |a: f64, b: f64| (a - b).abs() <= 1e-14 * (1.0 + b.abs());
            assert!(close(node.f.d1(), p0));
            assert!(close(node.f.d2(), p1 * p0));
            assert!(close(node.f.d3(), (p2 * p0 + p1 * p1) * p0));
        }
    }

    #[test]
    fn early_stop_is_recorded() {
        // f' = f^2 blows up at u = 1 for f0 = 1
        let phi = SmoothFn1::new("t^2", Interval::REAL_LINE, |t| t * t);
        let sol = integrate_profile_with_bound(&phi, 1.0, (0.0, 2.0), 1e-3, 1e6).unwrap();
        let stop = sol.stop().expect("must stop");
        assert_eq!(stop.reason, StopReason::Overflow);
        assert!(stop.u < 1.0 && stop.u > 0.99);
        assert!(sol.eval(1.5).is_err());

        // leaving the domain of sqrt(1 - t): f' = -sqrt(1 - f) ... heads into f > 1 if started positive
        let phi = SmoothFn1::new("sqrt(4-t^2)", Interval::new(-2.0, 2.0), |t| {
            (4.0 - t * t).sqrt()
        });
        let sol = integrate_profile(&phi, 0.0, (0.0, 5.0), 1e-2).unwrap();
        assert_eq!(sol.stop().unwrap().reason, StopReason::LeftDomain);
    }

    #[test]
    fn invalid_inputs() {
        let phi = cosh_phi();
        assert!(matches!(
            integrate_profile(&phi, 0.5, (0.0, 1.0), 0.1),
            Err(Error::InvalidInitialState(_))
        ));
        assert!(matches!(
            integrate_profile(&phi, 2.0, (0.0, 1.0), 0.0),
            Err(Error::StepSizeNonpositive(_))
        ));
    }
}
