//! The meridian surface `z(u,v) = f(u) l(v) + g(u) e4` and its invariants.
//!
//! Everything here is evaluated from order-3 jets of the profile and the
//! directrix. Where a quantity has a closed form in terms of `f` and `kappa`
//! (Gauss curvature, mean curvature vector) the jet route is computed
//! independently and both values are returned.

use serde::{Deserialize, Serialize};

use super::curve::{CurveJet, SphericalCurve};
use super::profile::{MeridianProfile, ProfileJet};
use crate::diffkit::{Dual, Jet3};
use crate::minkowski::{
    causal_character, verify_frame, CausalClass, FrameReport, Vec4M, DEFAULT_CAUSAL_TOL,
    ORTHONORMAL_GRAM,
};
use crate::{Error, Result};

/// `<H,H>` at or below this is treated as a minimal point.
pub const MINIMAL_POINT_TOL: f64 = 1e-12;

const SURFACE_CHECK_TOL: f64 = 1e-9;

/// Position and partial derivatives of `z` up to third order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJet {
    pub z: Vec4M,
    pub z_u: Vec4M,
    pub z_v: Vec4M,
    pub z_uu: Vec4M,
    pub z_uv: Vec4M,
    pub z_vv: Vec4M,
    pub z_uuu: Vec4M,
    pub z_uuv: Vec4M,
    pub z_uvv: Vec4M,
    pub z_vvv: Vec4M,
}

/// The orthonormal frame `{X, Y, N1, N2}` with `<X,X> = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameAtPoint {
    /// `X`, unit timelike along `z_u`.
    pub x: Vec4M,
    /// `Y`, unit spacelike along `z_v`.
    pub y: Vec4M,
    pub n1: Vec4M,
    pub n2: Vec4M,
}

impl FrameAtPoint {
    pub fn verify(&self, tol: f64) -> Result<FrameReport> {
        verify_frame(
            &[("X", self.x), ("Y", self.y), ("N1", self.n1), ("N2", self.n2)],
            &ORTHONORMAL_GRAM,
            tol,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

/// Gauss curvature by the second fundamental form and by `f''/f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussCurvature {
    pub sigma_route: f64,
    pub closed: f64,
}

/// Components of a normal vector in the basis `(N1, N2)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NormalPair {
    pub n1: f64,
    pub n2: f64,
}

impl NormalPair {
    pub fn new(n1: f64, n2: f64) -> Self {
        Self { n1, n2 }
    }

    pub fn norm_sq(&self) -> f64 {
        self.n1 * self.n1 + self.n2 * self.n2
    }

    pub fn max_abs(&self) -> f64 {
        self.n1.abs().max(self.n2.abs())
    }
}

/// Mean curvature vector, closed form and jet route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanCurvature {
    pub closed: NormalPair,
    pub jet_route: NormalPair,
}

/// Normal-bundle derivative of a normal field along `X` and `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NormalDerivative {
    pub along_x: NormalPair,
    pub along_y: NormalPair,
}

impl NormalDerivative {
    pub fn max_abs(&self) -> f64 {
        self.along_x.max_abs().max(self.along_y.max_abs())
    }
}

/// Ambient partial derivatives of the normal frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFrameDerivatives {
    pub n1_u: Vec4M,
    pub n1_v: Vec4M,
    pub n1_uv: Vec4M,
    pub n2_u: Vec4M,
    pub n2_v: Vec4M,
    pub n2_uv: Vec4M,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CausalFlags {
    pub z_u: CausalClass,
    pub z_v: CausalClass,
    pub mean_curvature: CausalClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub u: f64,
    pub v: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "K_closed")]
    pub k_closed: f64,
    #[serde(rename = "K_perp")]
    pub k_perp: f64,
    pub h1: f64,
    pub h2: f64,
    #[serde(rename = "H_norm_sq")]
    pub h_norm_sq: f64,
    #[serde(rename = "K_minus_H2")]
    pub k_minus_h2: f64,
    pub causal: CausalFlags,
}

impl InvariantReport {
    /// Sign of `K - <H,H>`, which selects `epsilon` of the natural PDE system.
    pub fn epsilon(&self) -> i8 {
        if self.k_minus_h2 > 0.0 {
            1
        } else if self.k_minus_h2 < 0.0 {
            -1
        } else {
            0
        }
    }
}

/// Profile and directrix jets at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointJets {
    pub u: f64,
    pub v: f64,
    pub profile: ProfileJet,
    pub curve: CurveJet,
    pub kappa: Jet3,
}

impl PointJets {
    pub fn surface_jet(&self) -> SurfaceJet {
        let (f, g) = (self.profile.f, self.profile.g);
        let l = self.curve.l;
        let e4 = Vec4M::E4;
        SurfaceJet {
            z: l[0] * f.value() + e4 * g.value(),
            z_u: l[0] * f.d1() + e4 * g.d1(),
            z_v: l[1] * f.value(),
            z_uu: l[0] * f.d2() + e4 * g.d2(),
            z_uv: l[1] * f.d1(),
            z_vv: l[2] * f.value(),
            z_uuu: l[0] * f.d3() + e4 * g.d3(),
            z_uuv: l[1] * f.d2(),
            z_uvv: l[2] * f.d1(),
            z_vvv: l[3] * f.value(),
        }
    }

    /// `N1 = n(v)` and `N2 = g' l + f' e4` with their partials.
    pub fn normal_frame(&self) -> (Vec4M, Vec4M, NormalFrameDerivatives) {
        let (f, g) = (self.profile.f, self.profile.g);
        let l = self.curve.l;
        let e4 = Vec4M::E4;
        let n1 = self.curve.normal();
        let n2 = l[0] * g.d1() + e4 * f.d1();
        let d = NormalFrameDerivatives {
            n1_u: Vec4M::ZERO,
            n1_v: self.curve.normal_d1(),
            n1_uv: Vec4M::ZERO,
            n2_u: l[0] * g.d2() + e4 * f.d2(),
            n2_v: l[1] * g.d1(),
            n2_uv: l[1] * g.d2(),
        };
        (n1, n2, d)
    }

    /// `h1 = kappa / (2f)`, `h2 = -(f f'' + g'^2) / (2 f g')` as first-order
    /// jets in `u`, plus their `v` derivatives.
    pub fn mean_curvature_jets(&self) -> (Dual, Dual, f64, f64) {
        let fj = self.profile.f;
        let gj = self.profile.g;
        let f = Dual::new(fj.value(), fj.d1());
        let f2 = Dual::new(fj.d2(), fj.d3());
        let g1 = Dual::new(gj.d1(), gj.d2());
        let k = self.kappa.value();
        let h1 = f.recip() * (0.5 * k);
        let h2 = -((f * f2 + g1 * g1) / (f * g1 * 2.0));
        let h1_v = self.kappa.d1() / (2.0 * fj.value());
        (h1, h2, h1_v, 0.0)
    }
}

/// `z(u,v) = f(u) l(v) + g(u) e4`.
#[derive(Debug, Clone)]
pub struct MeridianSurface {
    profile: MeridianProfile,
    directrix: SphericalCurve,
}

/// Tangent frame metric data: `a = sqrt(-E)`, `b = sqrt(G)`.
struct TangentData {
    jet: SurfaceJet,
    frame: FrameAtPoint,
    a: f64,
    b: f64,
}

impl MeridianSurface {
    /// Pairs a profile with a directrix and checks `<z_u,z_u> = -1`, `<z_v,z_v> = f^2`
    /// on a sample grid.
    pub fn new(profile: MeridianProfile, directrix: SphericalCurve) -> Result<Self> {
        let surface = Self { profile, directrix };
        let (ulo, uhi) = (surface.profile.interval().lo, surface.profile.interval().hi);
        let vi = surface.directrix.interval();
        let (vlo, vhi) = if vi.lo.is_finite() && vi.hi.is_finite() {
            (vi.lo, vi.hi)
        } else {
            (0.0, std::f64::consts::TAU)
        };
        for i in 0..5 {
            for j in 0..5 {
                let u = crate::grid::linspace(ulo, uhi, 5, i);
                let v = crate::grid::linspace(vlo, vhi, 5, j);
                let p = surface.point(u, v)?;
                let jet = p.surface_jet();
                let f = p.profile.f.value();
                let e_dev = (jet.z_u.dot(jet.z_u) + 1.0).abs();
                let g_dev = (jet.z_v.dot(jet.z_v) - f * f).abs();
                let scale = 1.0 + p.profile.g.d1().powi(2) + f * f;
                if !(e_dev <= SURFACE_CHECK_TOL * scale && g_dev <= SURFACE_CHECK_TOL * scale) {
                    return Err(Error::InvalidProfile(format!(
                        "surface check failed at ({u}, {v}): |E+1| = {e_dev:e}, |G-f^2| = {g_dev:e}"
                    )));
                }
            }
        }
        Ok(surface)
    }

    pub fn profile(&self) -> &MeridianProfile {
        &self.profile
    }

    pub fn directrix(&self) -> &SphericalCurve {
        &self.directrix
    }

    pub fn point(&self, u: f64, v: f64) -> Result<PointJets> {
        Ok(PointJets {
            u,
            v,
            profile: self.profile.eval(u)?,
            curve: self.directrix.jets(v)?,
            kappa: self.directrix.kappa(v)?,
        })
    }

    pub fn evaluate(&self, u: f64, v: f64) -> Result<SurfaceJet> {
        Ok(self.point(u, v)?.surface_jet())
    }

    fn tangent_data(p: &PointJets) -> TangentData {
        let jet = p.surface_jet();
        let a = (-jet.z_u.dot(jet.z_u)).sqrt();
        let b = jet.z_v.dot(jet.z_v).sqrt();
        let (n1, n2, _) = p.normal_frame();
        TangentData {
            frame: FrameAtPoint {
                x: jet.z_u * (1.0 / a),
                y: jet.z_v * (1.0 / b),
                n1,
                n2,
            },
            jet,
            a,
            b,
        }
    }

    pub fn frame(&self, u: f64, v: f64) -> Result<FrameAtPoint> {
        Ok(Self::tangent_data(&self.point(u, v)?).frame)
    }

    /// `(E, F, G)` from inner products of `z_u` and `z_v`.
    pub fn first_form(&self, u: f64, v: f64) -> Result<FirstForm> {
        let jet = self.evaluate(u, v)?;
        Ok(FirstForm {
            e: jet.z_u.dot(jet.z_u),
            f: jet.z_u.dot(jet.z_v),
            g: jet.z_v.dot(jet.z_v),
        })
    }

    /// Second fundamental form on the frame: `sigma(X,X), sigma(X,Y), sigma(Y,Y)`,
    /// each the normal part of the corresponding second derivative.
    fn sigma(t: &TangentData) -> [Vec4M; 3] {
        let (x, y) = (t.frame.x, t.frame.y);
        let (xx, yy) = (x.dot(x), y.dot(y));
        let normal_part = |w: Vec4M| w - x * (w.dot(x) / xx) - y * (w.dot(y) / yy);
        [
            normal_part(t.jet.z_uu) * (1.0 / (t.a * t.a)),
            normal_part(t.jet.z_uv) * (1.0 / (t.a * t.b)),
            normal_part(t.jet.z_vv) * (1.0 / (t.b * t.b)),
        ]
    }

    fn tangent_area(t: &TangentData) -> f64 {
        let (x, y) = (t.frame.x, t.frame.y);
        x.dot(x) * y.dot(y) - x.dot(y).powi(2)
    }

    pub fn gauss_curvature(&self, u: f64, v: f64) -> Result<GaussCurvature> {
        let p = self.point(u, v)?;
        let t = Self::tangent_data(&p);
        let [sxx, sxy, syy] = Self::sigma(&t);
        let sigma_route = (sxx.dot(syy) - sxy.dot(sxy)) / Self::tangent_area(&t);
        let f = p.profile.f;
        Ok(GaussCurvature {
            sigma_route,
            closed: f.d2() / f.value(),
        })
    }

    /// Normal connection form `omega(Z) = <D_Z N1, N2>` on the coordinate fields.
    fn connection_forms(n2: Vec4M, d: &NormalFrameDerivatives) -> (f64, f64) {
        (d.n1_u.dot(n2), d.n1_v.dot(n2))
    }

    /// Curvature of the normal connection, `<R(X,Y) N1, N2> / (<X,X><Y,Y> - <X,Y>^2)`,
    /// with `R(d_u, d_v) = d_u omega_v - d_v omega_u` assembled from jets.
    pub fn normal_curvature(&self, u: f64, v: f64) -> Result<f64> {
        let p = self.point(u, v)?;
        let t = Self::tangent_data(&p);
        let (_, n2, d) = p.normal_frame();
        let du_omega_v = d.n1_uv.dot(n2) + d.n1_v.dot(d.n2_u);
        let dv_omega_u = d.n1_uv.dot(n2) + d.n1_u.dot(d.n2_v);
        let r = (du_omega_v - dv_omega_u) / (t.a * t.b);
        Ok(r / Self::tangent_area(&t))
    }

    pub fn mean_curvature(&self, u: f64, v: f64) -> Result<MeanCurvature> {
        let p = self.point(u, v)?;
        let t = Self::tangent_data(&p);
        let [sxx, _, syy] = Self::sigma(&t);
        let (x, y) = (t.frame.x, t.frame.y);
        let h = (sxx * (1.0 / x.dot(x)) + syy * (1.0 / y.dot(y))) * 0.5;
        let (h1, h2, _, _) = p.mean_curvature_jets();
        Ok(MeanCurvature {
            closed: NormalPair::new(h1.value(), h2.value()),
            jet_route: NormalPair::new(h.dot(t.frame.n1), h.dot(t.frame.n2)),
        })
    }

    /// Partial derivatives of the frame normals.
    pub fn normal_frame_derivatives(&self, u: f64, v: f64) -> Result<NormalFrameDerivatives> {
        Ok(self.point(u, v)?.normal_frame().2)
    }

    /// `(D_X H, D_Y H)` in the basis `(N1, N2)`.
    pub fn normal_derivative_h(&self, u: f64, v: f64) -> Result<NormalDerivative> {
        let p = self.point(u, v)?;
        let t = Self::tangent_data(&p);
        let (_, n2, d) = p.normal_frame();
        let (omega_u, omega_v) = Self::connection_forms(n2, &d);
        let (h1, h2, h1_v, h2_v) = p.mean_curvature_jets();
        let (h1_0, h2_0) = (h1.value(), h2.value());
        let covariant = |dh1: f64, dh2: f64, omega: f64, scale: f64| {
            NormalPair::new((dh1 - h2_0 * omega) / scale, (dh2 + h1_0 * omega) / scale)
        };
        Ok(NormalDerivative {
            along_x: covariant(h1.d1(), h2.d1(), omega_u, t.a),
            along_y: covariant(h1_v, h2_v, omega_v, t.b),
        })
    }

    /// `(D_X H0, D_Y H0)` for `H0 = H / |H|`; fails at minimal points.
    pub fn normal_derivative_h0(&self, u: f64, v: f64) -> Result<NormalDerivative> {
        let p = self.point(u, v)?;
        let t = Self::tangent_data(&p);
        let (_, n2, d) = p.normal_frame();
        let (omega_u, omega_v) = Self::connection_forms(n2, &d);
        let (h1, h2, h1_v, h2_v) = p.mean_curvature_jets();
        let h = NormalPair::new(h1.value(), h2.value());
        let norm_sq = h.norm_sq();
        if !(norm_sq > MINIMAL_POINT_TOL) {
            return Err(Error::MinimalPoint { u, v });
        }
        let norm = norm_sq.sqrt();
        let unit = NormalPair::new(h.n1 / norm, h.n2 / norm);
        // d(h/|h|) = (dh - unit <unit, dh>) / |h|
        let d_unit = |dh1: f64, dh2: f64| {
            let along = unit.n1 * dh1 + unit.n2 * dh2;
            ((dh1 - unit.n1 * along) / norm, (dh2 - unit.n2 * along) / norm)
        };
        let covariant = |dh1: f64, dh2: f64, omega: f64, scale: f64| {
            let (du1, du2) = d_unit(dh1, dh2);
            NormalPair::new(
                (du1 - unit.n2 * omega) / scale,
                (du2 + unit.n1 * omega) / scale,
            )
        };
        Ok(NormalDerivative {
            along_x: covariant(h1.d1(), h2.d1(), omega_u, t.a),
            along_y: covariant(h1_v, h2_v, omega_v, t.b),
        })
    }

    pub fn invariant_report(&self, u: f64, v: f64) -> Result<InvariantReport> {
        let form = self.first_form(u, v)?;
        let k = self.gauss_curvature(u, v)?;
        let k_perp = self.normal_curvature(u, v)?;
        let h = self.mean_curvature(u, v)?.closed;
        let frame = self.frame(u, v)?;
        let jet = self.evaluate(u, v)?;
        let h_vec = frame.n1 * h.n1 + frame.n2 * h.n2;
        let h_norm_sq = h_vec.dot(h_vec);
        Ok(InvariantReport {
            u,
            v,
            e: form.e,
            f: form.f,
            g: form.g,
            k: k.sigma_route,
            k_closed: k.closed,
            k_perp,
            h1: h.n1,
            h2: h.n2,
            h_norm_sq,
            k_minus_h2: k.sigma_route - h_norm_sq,
            causal: CausalFlags {
                z_u: causal_character(jet.z_u, DEFAULT_CAUSAL_TOL),
                z_v: causal_character(jet.z_v, DEFAULT_CAUSAL_TOL),
                mean_curvature: causal_character(h_vec, DEFAULT_CAUSAL_TOL),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffkit::{Interval, SmoothFn1};
    use crate::geometry::Sign;

    fn flat_unit() -> MeridianSurface {
        let p = MeridianProfile::from_closed_form(
            "flat",
            (-1.0, 1.0),
            SmoothFn1::constant(1.0),
            SmoothFn1::polynomial(vec![0.0, 1.0]),
        )
        .unwrap();
        MeridianSurface::new(p, SphericalCurve::great_circle()).unwrap()
    }

    fn disc(curve: SphericalCurve) -> MeridianSurface {
        let f = SmoothFn1::new("sqrt(1-u^2)", Interval::new(-1.0, 1.0), |u| {
            (Jet3::constant(1.0) - u * u).sqrt()
        });
        let g = SmoothFn1::new("asin", Interval::new(-1.0, 1.0), |u| u.asin());
        let p = MeridianProfile::from_closed_form("disc", (-0.9, 0.9), f, g).unwrap();
        MeridianSurface::new(p, curve).unwrap()
    }

    #[test]
    fn flat_point_values() {
        let s = flat_unit();
        let jet = s.evaluate(0.0, 0.0).unwrap();
        assert_eq!(jet.z, Vec4M::E1);
        assert_eq!(jet.z_v, Vec4M::E2);
        let fr = s.frame(0.3, 0.0).unwrap();
        // f' = 0, g' = 1: N2 = l
        assert_eq!(fr.n2, Vec4M::E1);
        let ff = s.first_form(0.2, 1.0).unwrap();
        assert_eq!((ff.e, ff.f, ff.g), (-1.0, 0.0, 1.0));
    }

    #[test]
    fn disc_profile_second_derivatives() {
        // f = sqrt(1-u^2): f''(0) = -1, g''(0) = 0
        let s = disc(SphericalCurve::great_circle());
        let jet = s.evaluate(0.0, 0.4).unwrap();
        let l = s.directrix().jets(0.4).unwrap().position();
        assert!((jet.z_uu - l * -1.0).max_abs() < 1e-15);
        assert!((s.first_form(0.5, 0.0).unwrap().g - 0.75).abs() < 1e-15);
        let k = s.gauss_curvature(0.5, 0.0).unwrap();
        assert!((k.closed + 16.0 / 9.0).abs() < 1e-12);
        assert!((k.sigma_route + 16.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn minimal_disc_has_zero_mean_curvature() {
        let s = disc(SphericalCurve::great_circle());
        for (u, v) in [(0.0, 0.0), (0.5, 1.0), (-0.7, 2.0)] {
            let h = s.mean_curvature(u, v).unwrap();
            assert!(h.closed.max_abs() < 1e-14);
            assert!(h.jet_route.max_abs() < 1e-12);
            assert!(matches!(
                s.normal_derivative_h0(u, v),
                Err(Error::MinimalPoint { .. })
            ));
        }
    }

    #[test]
    fn latitude_disc_mean_curvature() {
        let s = disc(SphericalCurve::with_constant_curvature(2.0).unwrap());
        let h = s.mean_curvature(0.0, 0.3).unwrap();
        assert!((h.closed.n1 - 1.0).abs() < 1e-12);
        assert!(h.closed.n2.abs() < 1e-12);
        assert!((h.jet_route.n1 - 1.0).abs() < 1e-12);
        let dh = s.normal_derivative_h(0.5, 0.3).unwrap();
        let f = 0.75f64.sqrt();
        let fdot = -0.5 / f;
        assert!((dh.along_x.n1 - (-2.0 * fdot / (2.0 * f * f))).abs() < 1e-12);
        let dh0 = s.normal_derivative_h0(0.5, 0.3).unwrap();
        assert!(dh0.max_abs() < 1e-12);
    }

    #[test]
    fn frame_and_normal_curvature() {
        let s = disc(SphericalCurve::from_curvature(SmoothFn1::sin_offset(2.0), (0.0, 6.3), 1e-3).unwrap());
        for (u, v) in [(0.1, 0.5), (-0.6, 3.0), (0.8, 6.0)] {
            let fr = s.frame(u, v).unwrap();
            let rep = fr.verify(1e-9).unwrap();
            assert!(rep.pass, "{rep:?}");
            assert!(s.normal_curvature(u, v).unwrap().abs() < 1e-12);
            let inv = s.invariant_report(u, v).unwrap();
            assert_eq!(inv.causal.z_u, CausalClass::Timelike);
            assert_eq!(inv.causal.z_v, CausalClass::Spacelike);
            assert!((inv.h_norm_sq - (inv.h1 * inv.h1 + inv.h2 * inv.h2)).abs() < 1e-12);
        }
    }

    #[test]
    fn minus_branch_matches_jet_route() {
        let f = SmoothFn1::polynomial(vec![2.0, 0.5]);
        let p = MeridianProfile::from_f_with_quadrature("line", (0.0, 1.0), f, Sign::Minus).unwrap();
        let s = MeridianSurface::new(p, SphericalCurve::with_constant_curvature(1.5).unwrap()).unwrap();
        let h = s.mean_curvature(0.4, 0.2).unwrap();
        assert!((h.closed.n1 - h.jet_route.n1).abs() < 1e-12);
        assert!((h.closed.n2 - h.jet_route.n2).abs() < 1e-12);
    }
}
