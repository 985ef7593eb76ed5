//! The pseudo-orthonormal geometric frame `{x, y, n1, n2}` and its nine functions.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::diffkit::Jet3;
use crate::geometry::{MeridianSurface, MINIMAL_POINT_TOL};
use crate::minkowski::{verify_frame, FrameReport, Vec4M, PSEUDO_ORTHONORMAL_GRAM};
use crate::{Error, Result};

/// `x, y` lightlike with `<x, y> = -1`; `n1 = H / |H|`; `n2` completes an orthonormal normal pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicFrame {
    pub x: Vec4M,
    pub y: Vec4M,
    pub n1: Vec4M,
    pub n2: Vec4M,
}

impl IsotropicFrame {
    pub fn verify(&self, tol: f64) -> Result<FrameReport> {
        verify_frame(
            &[("x", self.x), ("y", self.y), ("n1", self.n1), ("n2", self.n2)],
            &PSEUDO_ORTHONORMAL_GRAM,
            tol,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GeometricFunctions {
    pub gamma1: f64,
    pub gamma2: f64,
    pub nu: f64,
    pub lambda1: f64,
    pub mu1: f64,
    pub lambda2: f64,
    pub mu2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl GeometricFunctions {
    pub const NAMES: [&'static str; 9] = [
        "gamma1", "gamma2", "nu", "lambda1", "mu1", "lambda2", "mu2", "beta1", "beta2",
    ];

    pub fn to_array(&self) -> [f64; 9] {
        [
            self.gamma1,
            self.gamma2,
            self.nu,
            self.lambda1,
            self.mu1,
            self.lambda2,
            self.mu2,
            self.beta1,
            self.beta2,
        ]
    }

    /// Entrywise `|self - other|`.
    pub fn abs_diff(&self, other: &Self) -> [f64; 9] {
        let (a, b) = (self.to_array(), other.to_array());
        std::array::from_fn(|i| (a[i] - b[i]).abs())
    }

    /// `max(|gamma1 + gamma2|, |lambda1 - lambda2|, |mu1 - mu2|)`.
    pub fn meridian_symmetry_defect(&self) -> f64 {
        (self.gamma1 + self.gamma2)
            .abs()
            .max((self.lambda1 - self.lambda2).abs())
            .max((self.mu1 - self.mu2).abs())
    }
}

/// An ambient field with its `u` and `v` partials.
#[derive(Debug, Clone, Copy)]
struct Moving {
    at: Vec4M,
    du: Vec4M,
    dv: Vec4M,
}

impl Moving {
    fn combine(self, other: Moving, s: f64, t: f64) -> Moving {
        Moving {
            at: self.at * s + other.at * t,
            du: self.du * s + other.du * t,
            dv: self.dv * s + other.dv * t,
        }
    }
}

/// Frame fields with partials, plus the scale factors of the coordinate directions.
struct FrameJets {
    x: Moving,
    y: Moving,
    n1: Moving,
    n2: Moving,
    a: f64,
    b: f64,
}

impl FrameJets {
    fn along_x(&self, m: &Moving) -> Vec4M {
        (m.du * (1.0 / self.a) + m.dv * (1.0 / self.b)) * (1.0 / SQRT_2)
    }

    fn along_y(&self, m: &Moving) -> Vec4M {
        (m.du * (1.0 / self.a) - m.dv * (1.0 / self.b)) * (1.0 / SQRT_2)
    }
}

fn frame_jets(surface: &MeridianSurface, u: f64, v: f64) -> Result<FrameJets> {
    let p = surface.point(u, v)?;
    let j = p.surface_jet();
    let (big_n1, big_n2, d) = p.normal_frame();
    let (h1, h2, h1_v, h2_v) = p.mean_curvature_jets();

    let a = (-j.z_u.dot(j.z_u)).sqrt();
    let b = j.z_v.dot(j.z_v).sqrt();
    let a_u = -j.z_uu.dot(j.z_u) / a;
    let a_v = -j.z_uv.dot(j.z_u) / a;
    let b_u = j.z_uv.dot(j.z_v) / b;
    let b_v = j.z_vv.dot(j.z_v) / b;
    let big_x = Moving {
        at: j.z_u * (1.0 / a),
        du: j.z_uu * (1.0 / a) - j.z_u * (a_u / (a * a)),
        dv: j.z_uv * (1.0 / a) - j.z_u * (a_v / (a * a)),
    };
    let big_y = Moving {
        at: j.z_v * (1.0 / b),
        du: j.z_uv * (1.0 / b) - j.z_v * (b_u / (b * b)),
        dv: j.z_vv * (1.0 / b) - j.z_v * (b_v / (b * b)),
    };

    let (w1, w2) = (h1.value(), h2.value());
    let norm_sq = w1 * w1 + w2 * w2;
    if !(norm_sq > MINIMAL_POINT_TOL) {
        return Err(Error::MinimalPoint { u, v });
    }
    let norm = norm_sq.sqrt();
    let (e1, e2) = (w1 / norm, w2 / norm);
    // d(h/|h|) = (dh - e <e, dh>) / |h|
    let d_unit = |d1: f64, d2: f64| {
        let along = e1 * d1 + e2 * d2;
        ((d1 - e1 * along) / norm, (d2 - e2 * along) / norm)
    };
    let (e1_u, e2_u) = d_unit(h1.d1(), h2.d1());
    let (e1_v, e2_v) = d_unit(h1_v, h2_v);
    let n1 = Moving {
        at: big_n1 * e1 + big_n2 * e2,
        du: big_n1 * e1_u + big_n2 * e2_u + d.n1_u * e1 + d.n2_u * e2,
        dv: big_n1 * e1_v + big_n2 * e2_v + d.n1_v * e1 + d.n2_v * e2,
    };
    let n2 = Moving {
        at: big_n1 * (-e2) + big_n2 * e1,
        du: big_n1 * (-e2_u) + big_n2 * e1_u - d.n1_u * e2 + d.n2_u * e1,
        dv: big_n1 * (-e2_v) + big_n2 * e1_v - d.n1_v * e2 + d.n2_v * e1,
    };
    let r = 1.0 / SQRT_2;
    Ok(FrameJets {
        x: big_x.combine(big_y, r, r),
        y: big_x.combine(big_y, r, -r),
        n1,
        n2,
        a,
        b,
    })
}

/// `x = (X + Y)/sqrt2`, `y = (X - Y)/sqrt2`, `n1 = H/|H|`, `n2` the normal
/// rotated from `n1` by a right angle in the `(N1, N2)` plane.
pub fn isotropic_frame(surface: &MeridianSurface, u: f64, v: f64) -> Result<IsotropicFrame> {
    let f = frame_jets(surface, u, v)?;
    Ok(IsotropicFrame {
        x: f.x.at,
        y: f.y.at,
        n1: f.n1.at,
        n2: f.n2.at,
    })
}

/// `(<H, n1>, <H, n2>)`.
pub fn mean_curvature_in_frame(surface: &MeridianSurface, u: f64, v: f64) -> Result<(f64, f64)> {
    let frame = isotropic_frame(surface, u, v)?;
    let ambient = surface.frame(u, v)?;
    let h = surface.mean_curvature(u, v)?.jet_route;
    let hv = ambient.n1 * h.n1 + ambient.n2 * h.n2;
    Ok((hv.dot(frame.n1), hv.dot(frame.n2)))
}

/// The nine functions by pairing ambient derivatives of the frame fields.
pub fn geometric_functions(surface: &MeridianSurface, u: f64, v: f64) -> Result<GeometricFunctions> {
    let f = frame_jets(surface, u, v)?;
    let dxx = f.along_x(&f.x);
    let dxy = f.along_x(&f.y);
    let dyy = f.along_y(&f.y);
    let dxn1 = f.along_x(&f.n1);
    let dyn1 = f.along_y(&f.n1);
    let (x, y, n1, n2) = (f.x.at, f.y.at, f.n1.at, f.n2.at);
    Ok(GeometricFunctions {
        gamma1: -dxx.dot(y),
        gamma2: -dyy.dot(x),
        nu: -dxy.dot(n1),
        lambda1: dxx.dot(n1),
        mu1: dxx.dot(n2),
        lambda2: dyy.dot(n1),
        mu2: dyy.dot(n2),
        beta1: dxn1.dot(n2),
        beta2: dyn1.dot(n2),
    })
}

fn sgn(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Closed forms on the profile `f^2 = -u^2 + 2au + b`:
/// `gamma1 = -gamma2 = (u - a)/(sqrt2 f^2)`, `nu = lambda = |kappa|/(2f)`,
/// `mu = -sgn(kappa) R / f^2`, `beta = 0`.
pub fn closed_geometric_functions_pnmc1(a: f64, b: f64, kappa: f64, u: f64) -> Result<GeometricFunctions> {
    let p = -u * u + 2.0 * a * u + b;
    if !(p > 0.0) {
        return Err(Error::OutOfDomain {
            what: "u",
            value: u,
            domain: format!("-u^2 + {}u + {b} > 0", 2.0 * a),
        });
    }
    let f = p.sqrt();
    let r = (a * a + b).sqrt();
    let gamma = (u - a) / (SQRT_2 * p);
    let lambda = kappa.abs() / (2.0 * f);
    let mu = -sgn(kappa) * r / p;
    Ok(GeometricFunctions {
        gamma1: gamma,
        gamma2: -gamma,
        nu: lambda,
        lambda1: lambda,
        mu1: mu,
        lambda2: lambda,
        mu2: mu,
        beta1: 0.0,
        beta2: 0.0,
    })
}

/// Closed forms on a profile with `f f'' + f'^2 + 1 = c sqrt(f'^2 + 1)`, from the `f` jet.
pub fn closed_geometric_functions_pnmc2(c: f64, _a: f64, kappa: f64, f_jet: &Jet3) -> Result<GeometricFunctions> {
    if c == 0.0 || kappa == 0.0 || kappa * kappa == c * c {
        return Err(Error::ParameterConflict(format!(
            "need c != 0, kappa != 0 and kappa^2 != c^2; got c = {c}, kappa = {kappa}"
        )));
    }
    let (f, fd) = (f_jet.value(), f_jet.d1());
    let s = (fd * fd + 1.0).sqrt();
    let q = (kappa * kappa + c * c).sqrt();
    let gamma = -fd / (SQRT_2 * f);
    let lambda = (kappa * kappa - c * c + 2.0 * c * s) / (2.0 * f * q);
    let mu = kappa * (c - s) / (f * q);
    Ok(GeometricFunctions {
        gamma1: gamma,
        gamma2: -gamma,
        nu: q / (2.0 * f),
        lambda1: lambda,
        mu1: mu,
        lambda2: lambda,
        mu2: mu,
        beta1: 0.0,
        beta2: 0.0,
    })
}
