//! The classified families of meridian surfaces and a grid verifier for their
//! defining properties.
//!
//! Profiles with a closed form (flat, constant Gauss curvature, minimal,
//! parallel mean curvature with constant `f`, the first parallel normalized
//! case) carry exact jets. The remaining families are defined by
//! `f' = phi(f)` and are integrated with RK4; `g` then follows from
//! `g' = sign sqrt(f'^2 + 1)`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diffkit::{integrate_profile, Interval, SmoothFn1};
use crate::geometry::{MeridianProfile, MeridianSurface, Sign, SphericalCurve};
use crate::grid::Grid2;
use crate::{Error, Result};

/// Default RK4 step for ODE-defined profiles.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Lower bound on `max |D_X H|` that witnesses a non-parallel mean curvature vector.
pub const NONPARALLEL_WITNESS: f64 = 0.01;

fn default_step() -> f64 {
    DEFAULT_STEP
}

fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {x}")))
    }
}

fn check_interval((lo, hi): (f64, f64)) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(Error::EmptyInterval(format!("[{lo}, {hi}]")))
    }
}

/// `f = a u + b`, `g = sign sqrt(a^2 + 1) u + c`.
pub fn make_flat(a: f64, b: f64, c: f64, sign: Sign, interval: (f64, f64)) -> Result<MeridianProfile> {
    check_interval(interval)?;
    for (n, x) in [("a", a), ("b", b), ("c", c)] {
        check_finite(n, x)?;
    }
    for u in [interval.0, interval.1] {
        if !(a * u + b > 0.0) {
            return Err(Error::NonpositiveProfile(format!("f = {a} u + {b} at u = {u}")));
        }
    }
    let slope = sign.value() * (a * a + 1.0).sqrt();
    MeridianProfile::from_closed_form(
        format!("flat a={a} b={b}"),
        interval,
        SmoothFn1::polynomial(vec![b, a]),
        SmoothFn1::polynomial(vec![c, slope]),
    )
}

/// `f = a1 cos(sqrt(-K) u) + a2 sin(sqrt(-K) u)` for `K < 0`, the hyperbolic
/// analogue for `K > 0`; `g` by quadrature with `g(u_min) = 0`.
pub fn make_constant_k(
    k: f64,
    a1: f64,
    a2: f64,
    sign: Sign,
    interval: (f64, f64),
) -> Result<MeridianProfile> {
    check_interval(interval)?;
    for (n, x) in [("K", k), ("a1", a1), ("a2", a2)] {
        check_finite(n, x)?;
    }
    if k == 0.0 {
        return Err(Error::InvalidParameter(
            "constant Gauss curvature family needs K != 0".into(),
        ));
    }
    let w = k.abs().sqrt();
    let f = if k < 0.0 {
        // a sinusoid positive at both ends of a window shorter than half a period
        if interval.1 - interval.0 >= std::f64::consts::PI / w {
            return Err(Error::NonpositiveProfile(format!(
                "interval longer than pi/sqrt(-K) = {}",
                std::f64::consts::PI / w
            )));
        }
        SmoothFn1::new(format!("{a1} cos({w} u) + {a2} sin({w} u)"), Interval::REAL_LINE, move |u| {
            (u * w).cos() * a1 + (u * w).sin() * a2
        })
    } else {
        SmoothFn1::new(format!("{a1} cosh({w} u) + {a2} sinh({w} u)"), Interval::REAL_LINE, move |u| {
            (u * w).cosh() * a1 + (u * w).sinh() * a2
        })
    };
    for u in [interval.0, interval.1] {
        let fu = f.value(u)?;
        if !(fu > 0.0) {
            return Err(Error::NonpositiveProfile(format!("f({u}) = {fu}")));
        }
    }
    MeridianProfile::from_f_with_quadrature(format!("constant K={k}"), interval, f, sign)
}

/// `f = sqrt(-u^2 + 2 a u + b)`, `g = sign R asin((u - a) / R) + c`, `R = sqrt(a^2 + b)`.
pub fn make_minimal(a: f64, b: f64, c: f64, sign: Sign, interval: (f64, f64)) -> Result<MeridianProfile> {
    check_interval(interval)?;
    for (n, x) in [("a", a), ("b", b), ("c", c)] {
        check_finite(n, x)?;
    }
    let r2 = a * a + b;
    if !(r2 > 0.0) {
        return Err(Error::EmptyInterval(format!(
            "-u^2 + 2au + b > 0 has no solutions for a = {a}, b = {b}"
        )));
    }
    let r = r2.sqrt();
    let domain = Interval::new(a - r, a + r);
    if !domain.contains(interval.0) || !domain.contains(interval.1) {
        return Err(Error::NonpositiveProfile(format!(
            "[{}, {}] leaves {domain} where -u^2 + 2au + b > 0",
            interval.0, interval.1
        )));
    }
    let f = SmoothFn1::new(format!("sqrt(-u^2 + {}u + {b})", 2.0 * a), domain, move |u| {
        (-(u * u) + u * (2.0 * a) + b).sqrt()
    });
    let s = sign.value();
    let g = SmoothFn1::new(format!("{} asin((u - {a})/{r}) + {c}", s * r), domain, move |u| {
        ((u - a) * (1.0 / r)).asin() * (s * r) + c
    });
    MeridianProfile::from_closed_form(format!("minimal a={a} b={b}"), interval, f, g)
}

/// Same profile as [`make_minimal`]; paired with a directrix of nonzero curvature it
/// has a parallel normalized, non-parallel mean curvature vector.
pub fn make_pnmc1(a: f64, b: f64, c: f64, sign: Sign, interval: (f64, f64)) -> Result<MeridianProfile> {
    make_minimal(a, b, c, sign, interval)
}

/// Branch choice of the constant mean curvature generator: the outer sign of the
/// square root and the inner `+-` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CmcBranch {
    #[serde(default)]
    pub outer: Sign,
    #[serde(default)]
    pub inner: Sign,
}

/// `phi(t) = outer sqrt(G(t)^2 / t^2 - 1)` with
/// `G = c + inner (t/2) S - inner (b^2 / 4a) ln|2at + S|`, `S = sqrt(4a^2 t^2 - b^2)`.
pub fn cmc_generator(a: f64, b: f64, c: f64, branch: CmcBranch) -> SmoothFn1 {
    let (so, si) = (branch.outer.value(), branch.inner.value());
    let lo = b.abs() / (2.0 * a);
    SmoothFn1::new(
        format!("CMC generator a={a} b={b} c={c}"),
        Interval::new(lo, f64::INFINITY),
        move |t| {
            let s = (t * t * (4.0 * a * a) - b * b).sqrt();
            let log = (t * (2.0 * a) + s).ln_abs();
            let big_g = t * s * (0.5 * si) - log * (si * b * b / (4.0 * a)) + c;
            ((big_g / t).sqr() - 1.0).sqrt() * so
        },
    )
}

fn check_generator_at(phi: &SmoothFn1, f0: f64) -> Result<()> {
    match phi.eval(f0) {
        Ok(j) if j.value() != 0.0 || j.d1().is_finite() => Ok(()),
        _ => Err(Error::RadicandNegative(format!("{} at f0 = {f0}", phi.name()))),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn make_cmc(
    a: f64,
    b: f64,
    c: f64,
    f0: f64,
    branch: CmcBranch,
    sign_g: Sign,
    interval: (f64, f64),
    h: f64,
) -> Result<MeridianProfile> {
    check_interval(interval)?;
    for (n, x) in [("a", a), ("b", b), ("c", c), ("f0", f0)] {
        check_finite(n, x)?;
    }
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "constant mean curvature a must be positive, got {a}"
        )));
    }
    if b == 0.0 {
        return Err(Error::InvalidParameter("spherical curvature b must be nonzero".into()));
    }
    if !(4.0 * a * a * f0 * f0 - b * b > 0.0) {
        return Err(Error::RadicandNegative(format!(
            "4a^2 f0^2 - b^2 = {} at f0 = {f0}",
            4.0 * a * a * f0 * f0 - b * b
        )));
    }
    let phi = cmc_generator(a, b, c, branch);
    check_generator_at(&phi, f0)?;
    let sol = integrate_profile(&phi, f0, interval, h)?;
    MeridianProfile::from_ode(format!("CMC a={a} b={b} c={c}"), sol, sign_g)
}

/// `phi(t) = sign sqrt((c + a t^2)^2 - t^2) / t`.
pub fn parallel_h1_generator(a: f64, c: f64, sign: Sign) -> SmoothFn1 {
    let s = sign.value();
    SmoothFn1::new(
        format!("parallel H generator a={a} c={c}"),
        Interval::new(0.0, f64::INFINITY),
        move |t| ((t * t * a + c).sqr() - t * t).sqrt() / t * s,
    )
}

pub fn make_parallel_h1(
    a: f64,
    c: f64,
    f0: f64,
    sign_phi: Sign,
    sign_g: Sign,
    interval: (f64, f64),
    h: f64,
) -> Result<MeridianProfile> {
    check_interval(interval)?;
    for (n, x) in [("a", a), ("c", c), ("f0", f0)] {
        check_finite(n, x)?;
    }
    if a == 0.0 {
        return Err(Error::InvalidParameter("parallel mean curvature needs a != 0".into()));
    }
    let rad = (c + a * f0 * f0).powi(2) - f0 * f0;
    if !(f0 > 0.0 && rad > 0.0) {
        return Err(Error::RadicandNegative(format!("(c + a f0^2)^2 - f0^2 = {rad}")));
    }
    let phi = parallel_h1_generator(a, c, sign_phi);
    let sol = integrate_profile(&phi, f0, interval, h)?;
    MeridianProfile::from_ode(format!("parallel H a={a} c={c}"), sol, sign_g)
}

/// `f = a`, `g = sign u + b`.
pub fn make_parallel_h2(a: f64, b: f64, sign: Sign, interval: (f64, f64)) -> Result<MeridianProfile> {
    check_interval(interval)?;
    check_finite("a", a)?;
    check_finite("b", b)?;
    if !(a > 0.0) {
        return Err(Error::NonpositiveProfile(format!("f = a = {a}")));
    }
    MeridianProfile::from_closed_form(
        format!("cylinder a={a}"),
        interval,
        SmoothFn1::constant(a),
        SmoothFn1::polynomial(vec![b, sign.value()]),
    )
}

/// `phi(t) = sign sqrt((c t + a)^2 - t^2) / t`.
pub fn pnmc2_generator(a: f64, c: f64, sign: Sign) -> SmoothFn1 {
    let s = sign.value();
    SmoothFn1::new(
        format!("parallel H0 generator a={a} c={c}"),
        Interval::new(0.0, f64::INFINITY),
        move |t| ((t * c + a).sqr() - t * t).sqrt() / t * s,
    )
}

#[allow(clippy::too_many_arguments)]
pub fn make_pnmc2(
    a: f64,
    c: f64,
    kappa: f64,
    f0: f64,
    sign_phi: Sign,
    sign_g: Sign,
    interval: (f64, f64),
    h: f64,
) -> Result<MeridianProfile> {
    check_interval(interval)?;
    for (n, x) in [("a", a), ("c", c), ("kappa", kappa), ("f0", f0)] {
        check_finite(n, x)?;
    }
    if c == 0.0 {
        return Err(Error::InvalidParameter("c must be nonzero".into()));
    }
    if kappa == 0.0 {
        return Err(Error::InvalidParameter("kappa must be nonzero".into()));
    }
    if kappa * kappa == c * c {
        return Err(Error::ParameterConflict(format!(
            "kappa^2 = c^2 = {}",
            c * c
        )));
    }
    let rad = (c * f0 + a).powi(2) - f0 * f0;
    if !(f0 > 0.0 && rad > 0.0) {
        return Err(Error::RadicandNegative(format!("(c f0 + a)^2 - f0^2 = {rad}")));
    }
    let phi = pnmc2_generator(a, c, sign_phi);
    let sol = integrate_profile(&phi, f0, interval, h)?;
    MeridianProfile::from_ode(format!("parallel H0 a={a} c={c}"), sol, sign_g)
}

/// Family tag and parameters. JSON: `{"family": "<tag>", ...parameters}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum FamilyParams {
    Flat {
        a: f64,
        b: f64,
        #[serde(default)]
        c: f64,
        #[serde(default)]
        sign_g: Sign,
    },
    ConstantK {
        #[serde(rename = "K")]
        k: f64,
        a1: f64,
        a2: f64,
        #[serde(default)]
        sign_g: Sign,
    },
    Minimal {
        a: f64,
        b: f64,
        #[serde(default)]
        c: f64,
        #[serde(default)]
        sign_g: Sign,
    },
    #[serde(rename = "CMC")]
    Cmc {
        /// `|H|`.
        a: f64,
        /// Spherical curvature of the directrix.
        b: f64,
        c: f64,
        f0: f64,
        #[serde(default)]
        sign_outer: Sign,
        #[serde(default)]
        sign_inner: Sign,
        #[serde(default)]
        sign_g: Sign,
    },
    ParallelH1 {
        a: f64,
        #[serde(default)]
        c: f64,
        f0: f64,
        #[serde(default)]
        sign_phi: Sign,
        #[serde(default)]
        sign_g: Sign,
    },
    ParallelH2 {
        a: f64,
        #[serde(default)]
        b: f64,
        kappa: f64,
        #[serde(default)]
        sign_g: Sign,
    },
    #[serde(rename = "PNMC1")]
    Pnmc1 {
        a: f64,
        b: f64,
        #[serde(default)]
        c: f64,
        kappa: f64,
        #[serde(default)]
        sign_g: Sign,
    },
    #[serde(rename = "PNMC2")]
    Pnmc2 {
        a: f64,
        c: f64,
        kappa: f64,
        f0: f64,
        #[serde(default)]
        sign_phi: Sign,
        #[serde(default)]
        sign_g: Sign,
    },
}

/// A family with its parameter interval and ODE step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub params: FamilyParams,
    pub u_min: f64,
    pub u_max: f64,
    #[serde(default = "default_step")]
    pub h: f64,
}

/// The property a family is characterized by.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum FamilyProperty {
    /// `K = 0`.
    Flat,
    /// `K` equal to the given constant.
    ConstantGauss(f64),
    /// `H = 0`.
    Minimal,
    /// `|H|` equal to the given constant.
    ConstantMeanCurvature(f64),
    /// `D H = 0`.
    ParallelMeanCurvature,
    /// `D H0 = 0` with `D H` nonzero somewhere.
    ParallelNormalizedMeanCurvature,
}

impl fmt::Display for FamilyProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyProperty::Flat => write!(f, "K = 0"),
            FamilyProperty::ConstantGauss(k) => write!(f, "K = {k}"),
            FamilyProperty::Minimal => write!(f, "H = 0"),
            FamilyProperty::ConstantMeanCurvature(a) => write!(f, "|H| = {a}"),
            FamilyProperty::ParallelMeanCurvature => write!(f, "DH = 0"),
            FamilyProperty::ParallelNormalizedMeanCurvature => write!(f, "DH0 = 0 and DH != 0"),
        }
    }
}

impl FamilySpec {
    pub fn new(params: FamilyParams, u_range: (f64, f64)) -> Self {
        Self {
            params,
            u_min: u_range.0,
            u_max: u_range.1,
            h: DEFAULT_STEP,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self.params {
            FamilyParams::Flat { .. } => "Flat",
            FamilyParams::ConstantK { .. } => "ConstantK",
            FamilyParams::Minimal { .. } => "Minimal",
            FamilyParams::Cmc { .. } => "CMC",
            FamilyParams::ParallelH1 { .. } => "ParallelH1",
            FamilyParams::ParallelH2 { .. } => "ParallelH2",
            FamilyParams::Pnmc1 { .. } => "PNMC1",
            FamilyParams::Pnmc2 { .. } => "PNMC2",
        }
    }

    fn interval(&self) -> (f64, f64) {
        (self.u_min, self.u_max)
    }

    pub fn build_profile(&self) -> Result<MeridianProfile> {
        let iv = self.interval();
        match self.params {
            FamilyParams::Flat { a, b, c, sign_g } => make_flat(a, b, c, sign_g, iv),
            FamilyParams::ConstantK { k, a1, a2, sign_g } => make_constant_k(k, a1, a2, sign_g, iv),
            FamilyParams::Minimal { a, b, c, sign_g } => make_minimal(a, b, c, sign_g, iv),
            FamilyParams::Cmc {
                a,
                b,
                c,
                f0,
                sign_outer,
                sign_inner,
                sign_g,
            } => make_cmc(
                a,
                b,
                c,
                f0,
                CmcBranch {
                    outer: sign_outer,
                    inner: sign_inner,
                },
                sign_g,
                iv,
                self.h,
            ),
            FamilyParams::ParallelH1 {
                a,
                c,
                f0,
                sign_phi,
                sign_g,
            } => make_parallel_h1(a, c, f0, sign_phi, sign_g, iv, self.h),
            FamilyParams::ParallelH2 { a, b, sign_g, .. } => make_parallel_h2(a, b, sign_g, iv),
            FamilyParams::Pnmc1 { a, b, c, sign_g, .. } => make_pnmc1(a, b, c, sign_g, iv),
            FamilyParams::Pnmc2 {
                a,
                c,
                kappa,
                f0,
                sign_phi,
                sign_g,
            } => make_pnmc2(a, c, kappa, f0, sign_phi, sign_g, iv, self.h),
        }
    }

    /// Spherical curvature the family is built for: 0 for the great-circle families.
    pub fn directrix_curvature(&self) -> f64 {
        match self.params {
            FamilyParams::Cmc { b, .. } => b,
            FamilyParams::ParallelH2 { kappa, .. }
            | FamilyParams::Pnmc1 { kappa, .. }
            | FamilyParams::Pnmc2 { kappa, .. } => kappa,
            _ => 0.0,
        }
    }

    /// Great circle or latitude circle matching [`FamilySpec::directrix_curvature`].
    pub fn default_directrix(&self) -> Result<SphericalCurve> {
        SphericalCurve::with_constant_curvature(self.directrix_curvature())
    }

    pub fn build_surface(&self) -> Result<MeridianSurface> {
        self.build_surface_with(self.default_directrix()?)
    }

    pub fn build_surface_with(&self, directrix: SphericalCurve) -> Result<MeridianSurface> {
        MeridianSurface::new(self.build_profile()?, directrix)
    }

    pub fn property(&self) -> FamilyProperty {
        match self.params {
            FamilyParams::Flat { .. } => FamilyProperty::Flat,
            FamilyParams::ConstantK { k, .. } => FamilyProperty::ConstantGauss(k),
            FamilyParams::Minimal { .. } => FamilyProperty::Minimal,
            FamilyParams::Cmc { a, .. } => FamilyProperty::ConstantMeanCurvature(a),
            FamilyParams::ParallelH1 { .. } | FamilyParams::ParallelH2 { .. } => {
                FamilyProperty::ParallelMeanCurvature
            }
            FamilyParams::Pnmc1 { .. } | FamilyParams::Pnmc2 { .. } => {
                FamilyProperty::ParallelNormalizedMeanCurvature
            }
        }
    }

    /// `|H|` of the parallel mean curvature families: `|a|` for the first case,
    /// `sqrt(1 + kappa^2) / (2a)` for the second.
    pub fn parallel_h_norm(&self) -> Option<f64> {
        match self.params {
            FamilyParams::ParallelH1 { a, .. } => Some(a.abs()),
            FamilyParams::ParallelH2 { a, kappa, .. } => Some((1.0 + kappa * kappa).sqrt() / (2.0 * a)),
            _ => None,
        }
    }
}

/// One instance of every family, as used by the self-check and the examples.
pub fn reference_specs() -> Vec<FamilySpec> {
    use FamilyParams::*;
    let plus = Sign::Plus;
    vec![
        FamilySpec::new(Flat { a: 1.0, b: 2.0, c: 0.0, sign_g: plus }, (0.0, 1.0)),
        FamilySpec::new(ConstantK { k: 1.0, a1: 1.0, a2: 0.0, sign_g: plus }, (-1.0, 1.0)),
        FamilySpec::new(Minimal { a: 0.0, b: 1.0, c: 0.0, sign_g: plus }, (-0.9, 0.9)),
        FamilySpec::new(
            Cmc { a: 1.0, b: 1.0, c: 1.0, f0: 1.0, sign_outer: plus, sign_inner: plus, sign_g: plus },
            (0.0, 1.0),
        ),
        FamilySpec::new(
            ParallelH1 { a: 1.0, c: 0.0, f0: 0.1f64.cosh(), sign_phi: plus, sign_g: plus },
            (0.0, 1.0),
        ),
        FamilySpec::new(ParallelH2 { a: 2.0, b: 0.0, kappa: 3.0, sign_g: plus }, (0.0, 1.0)),
        FamilySpec::new(Pnmc1 { a: 0.0, b: 1.0, c: 0.0, kappa: 2.0, sign_g: plus }, (-0.9, 0.9)),
        FamilySpec::new(
            Pnmc2 { a: 1.0, c: 2.0, kappa: 1.0, f0: 1.0, sign_phi: plus, sign_g: plus },
            (0.0, 1.0),
        ),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub quantity: String,
    pub max: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyVerdict {
    pub property: String,
    pub max_violation: f64,
    /// `(u, v)` where the violation is largest.
    pub worst_point: (f64, f64),
    pub tol: f64,
    pub pass: bool,
    pub grid: Grid2,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Violation of `property` at one point, and the `|D_X H|` witness where relevant.
fn violation_at(surface: &MeridianSurface, property: FamilyProperty, u: f64, v: f64) -> Result<(f64, f64)> {
    Ok(match property {
        FamilyProperty::Flat => (surface.gauss_curvature(u, v)?.sigma_route.abs(), 0.0),
        FamilyProperty::ConstantGauss(k) => ((surface.gauss_curvature(u, v)?.sigma_route - k).abs(), 0.0),
        FamilyProperty::Minimal => (surface.mean_curvature(u, v)?.jet_route.norm_sq().sqrt(), 0.0),
        FamilyProperty::ConstantMeanCurvature(a) => {
            let h = surface.mean_curvature(u, v)?.jet_route.norm_sq().sqrt();
            ((h - a.abs()).abs(), 0.0)
        }
        FamilyProperty::ParallelMeanCurvature => (surface.normal_derivative_h(u, v)?.max_abs(), 0.0),
        FamilyProperty::ParallelNormalizedMeanCurvature => (
            surface.normal_derivative_h0(u, v)?.max_abs(),
            surface.normal_derivative_h(u, v)?.along_x.max_abs(),
        ),
    })
}

/// Evaluates `property` on every grid point (in parallel) and reports the largest violation.
pub fn verify_property(
    surface: &MeridianSurface,
    property: FamilyProperty,
    grid: &Grid2,
    tol: f64,
) -> Result<FamilyVerdict> {
    grid.validate()?;
    let values = grid
        .points()
        .into_par_iter()
        .map(|(u, v)| violation_at(surface, property, u, v).map(|(x, w)| (x, w, (u, v))))
        .collect::<Result<Vec<_>>>()?;
    let mut max_violation = 0.0_f64;
    let mut worst_point = (grid.u_min, grid.v_min);
    let mut witness_max = 0.0_f64;
    for (x, w, p) in values {
        // NaN counts as a violation
        if !(x <= max_violation) {
            max_violation = if x.is_nan() { f64::INFINITY } else { x };
            worst_point = p;
        }
        witness_max = witness_max.max(w);
    }
    let witness = (property == FamilyProperty::ParallelNormalizedMeanCurvature).then_some(Witness {
        quantity: "max |D_X H|".to_string(),
        max: witness_max,
        threshold: NONPARALLEL_WITNESS,
    });
    let pass = max_violation <= tol && witness.as_ref().is_none_or(|w| w.max >= w.threshold);
    Ok(FamilyVerdict {
        property: property.to_string(),
        max_violation,
        worst_point,
        tol,
        pass,
        grid: *grid,
        witness,
    })
}

/// Checks the property of `spec` on `surface`.
pub fn verify_family(
    surface: &MeridianSurface,
    spec: &FamilySpec,
    grid: &Grid2,
    tol: f64,
) -> Result<FamilyVerdict> {
    verify_property(surface, spec.property(), grid, tol)
}

/// Default `(u, v)` grid for a family spec: its `u` range and `v` in `[0, 2 pi]`.
pub fn default_grid(spec: &FamilySpec, n: usize) -> Result<Grid2> {
    Grid2::new((spec.u_min, spec.u_max), n, (0.0, std::f64::consts::TAU), n)
}
