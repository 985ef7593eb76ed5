//! Residuals of the natural PDE systems and their explicit solution family.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chart::{BarredPartials, IsotropicChart};
use super::fields::{FieldTriple, Partials2, ScalarField2};
use crate::diffkit::{Jet3, SmoothFn1};
use crate::families::make_pnmc1;
use crate::geometry::{MeridianSurface, Sign, SphericalCurve};
use crate::grid::Grid2;
use crate::{Error, Result};

/// Smallest `|mu|` for which `ln|mu|` is taken.
pub const MU_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub name: String,
    pub max_abs: f64,
    pub rms: f64,
    pub worst_point: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub system: String,
    pub rows: Vec<ResidualRow>,
    pub grid: Grid2,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<i8>,
    pub tol: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn max_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.max_abs).fold(0.0, f64::max)
    }
}

/// Value, both first partials and the mixed second partial in some pair of coordinates.
#[derive(Debug, Clone, Copy)]
struct Local {
    value: f64,
    d1: f64,
    d2: f64,
    d12: f64,
}

impl From<Partials2> for Local {
    fn from(p: Partials2) -> Self {
        Self {
            value: p.value,
            d1: p.u,
            d2: p.v,
            d12: p.uv,
        }
    }
}

impl From<BarredPartials> for Local {
    fn from(p: BarredPartials) -> Self {
        Self {
            value: p.value,
            d1: p.ubar,
            d2: p.vbar,
            d12: p.ubar_vbar,
        }
    }
}

/// Partials of `ln|mu|`.
struct LogMu {
    abs_mu: f64,
    d1: f64,
    d2: f64,
    d12: f64,
}

fn log_mu(mu: &Local, u: f64, v: f64) -> Result<LogMu> {
    let m = mu.value;
    if !(m.abs() > MU_FLOOR) {
        return Err(Error::MuVanishes { u, v });
    }
    Ok(LogMu {
        abs_mu: m.abs(),
        d1: mu.d1 / m,
        d2: mu.d2 / m,
        d12: mu.d12 / m - mu.d1 * mu.d2 / (m * m),
    })
}

/// `nu_1 + lambda_2 - lambda L_2`, `lambda_1 - eps nu_2 - lambda L_1`,
/// `|mu| L_12 + nu^2 + eps (lambda^2 + mu^2)` with `L = ln|mu|`.
fn fund_rows(l: &Local, m: &Local, n: &Local, eps: f64, u: f64, v: f64) -> Result<Vec<f64>> {
    let lm = log_mu(m, u, v)?;
    Ok(vec![
        n.d1 + l.d2 - l.value * lm.d2,
        l.d1 - eps * n.d2 - l.value * lm.d1,
        lm.abs_mu * lm.d12 + n.value * n.value + eps * (l.value * l.value + m.value * m.value),
    ])
}

fn sweep(
    system: &str,
    names: &[&str],
    grid: &Grid2,
    epsilon: Option<i8>,
    tol: f64,
    at: impl Fn(f64, f64) -> Result<Vec<f64>> + Sync,
) -> Result<ResidualReport> {
    grid.validate()?;
    let values = grid
        .points()
        .into_par_iter()
        .map(|(u, v)| at(u, v).map(|r| (r, (u, v))))
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<ResidualRow> = names
        .iter()
        .map(|n| ResidualRow {
            name: n.to_string(),
            max_abs: 0.0,
            rms: 0.0,
            worst_point: (grid.u_min, grid.v_min),
        })
        .collect();
    for (r, p) in &values {
        for (row, x) in rows.iter_mut().zip(r) {
            let a = x.abs();
            if !(a <= row.max_abs) {
                row.max_abs = if a.is_nan() { f64::INFINITY } else { a };
                row.worst_point = *p;
            }
            row.rms += x * x;
        }
    }
    for row in &mut rows {
        row.rms = (row.rms / values.len() as f64).sqrt();
    }
    let pass = rows.iter().all(|r| r.max_abs <= tol);
    Ok(ResidualReport {
        system: system.to_string(),
        rows,
        grid: *grid,
        epsilon,
        tol,
        pass,
    })
}

fn check_epsilon(eps: i8) -> Result<f64> {
    match eps {
        1 | -1 => Ok(eps as f64),
        _ => Err(Error::InvalidParameter(format!("epsilon must be +1 or -1, got {eps}"))),
    }
}

const FUND_ROWS: [&str; 3] = ["eq1", "eq2", "eq3"];

/// The fundamental system with `(u, v)` taken as the canonical parameters.
pub fn residual_fund(fields: &FieldTriple, epsilon: i8, grid: &Grid2, tol: f64) -> Result<ResidualReport> {
    let eps = check_epsilon(epsilon)?;
    sweep("fund", &FUND_ROWS, grid, Some(epsilon), tol, |u, v| {
        let l = fields.lambda.eval(u, v)?.into();
        let m = fields.mu.eval(u, v)?.into();
        let n = fields.nu.eval(u, v)?.into();
        fund_rows(&l, &m, &n, eps, u, v)
    })
}

/// The fundamental system in the barred coordinates of `chart`.
pub fn residual_fund_in_chart(
    fields: &FieldTriple,
    epsilon: i8,
    chart: &IsotropicChart,
    grid: &Grid2,
    tol: f64,
) -> Result<ResidualReport> {
    let eps = check_epsilon(epsilon)?;
    fund_in_chart("fund (isotropic chart)", fields, eps, epsilon, chart, grid, tol)
}

fn fund_in_chart(
    system: &str,
    fields: &FieldTriple,
    eps: f64,
    epsilon: i8,
    chart: &IsotropicChart,
    grid: &Grid2,
    tol: f64,
) -> Result<ResidualReport> {
    sweep(system, &FUND_ROWS, grid, Some(epsilon), tol, |u, v| {
        let bar = |f: &ScalarField2| -> Result<Local> { Ok(chart.barred(u, &f.eval(u, v)?)?.into()) };
        fund_rows(&bar(&fields.lambda)?, &bar(&fields.mu)?, &bar(&fields.nu)?, eps, u, v)
    })
}

/// `nu_ubar + lambda_vbar - lambda L_vbar`, `lambda_ubar + nu_vbar - lambda L_ubar`,
/// `|mu| L_ubar_vbar + nu^2 - lambda^2 - mu^2`.
pub fn residual_syst1(
    fields: &FieldTriple,
    chart: &IsotropicChart,
    grid: &Grid2,
    tol: f64,
) -> Result<ResidualReport> {
    fund_in_chart("syst1", fields, -1.0, -1, chart, grid, tol)
}

/// `nu_u + lambda_v - lambda L_v` and `|mu| L_uv + nu^2`, with `nu_v` as a third row.
pub fn residual_degenerate(fields: &FieldTriple, grid: &Grid2, tol: f64) -> Result<ResidualReport> {
    sweep("degenerate", &["eq1", "eq2", "nu_v"], grid, None, tol, |u, v| {
        let l: Local = fields.lambda.eval(u, v)?.into();
        let m: Local = fields.mu.eval(u, v)?.into();
        let n: Local = fields.nu.eval(u, v)?.into();
        let lm = log_mu(&m, u, v)?;
        Ok(vec![
            n.d1 + l.d2 - l.value * lm.d2,
            lm.abs_mu * lm.d12 + n.value * n.value,
            n.d2,
        ])
    })
}

fn radius(a: f64, b: f64) -> Result<f64> {
    let r2 = a * a + b;
    if r2 > 0.0 {
        Ok(r2.sqrt())
    } else {
        Err(Error::EmptyInterval(format!(
            "-u^2 + 2au + b > 0 has no solutions for a = {a}, b = {b}"
        )))
    }
}

/// `lambda = nu = kappa(v) / (2 sqrt(p))`, `mu = -sqrt(a^2 + b) / p` with
/// `p = -u^2 + 2au + b`, on `u_range x v_range`.
pub fn solution_family(
    a: f64,
    b: f64,
    kappa: SmoothFn1,
    u_range: (f64, f64),
    v_range: (f64, f64),
) -> Result<FieldTriple> {
    let r = radius(a, b)?;
    for u in [u_range.0, u_range.1] {
        if !(-u * u + 2.0 * a * u + b > 0.0) {
            return Err(Error::EmptyInterval(format!(
                "u = {u} leaves (a - R, a + R) = ({}, {})",
                a - r,
                a + r
            )));
        }
    }
    for i in 0..=64 {
        let v = crate::grid::linspace(v_range.0, v_range.1, 65, i);
        if kappa.value(v)? == 0.0 {
            return Err(Error::InvalidParameter(format!("kappa vanishes at v = {v}")));
        }
    }
    let p = move |u: f64| Jet3::variable(u) * (2.0 * a) - Jet3::variable(u).sqr() + b;
    let half_inv_sqrt = move |u: f64| p(u).sqrt().recip() * 0.5;
    let k = kappa.clone();
    let lam = move |u: f64, v: f64| Ok(Partials2::separable(&half_inv_sqrt(u), &k.eval(v)?));
    let lambda = ScalarField2::new(format!("kappa/(2 sqrt p), a={a} b={b}"), u_range, v_range, lam.clone())?;
    let nu = ScalarField2::new(format!("kappa/(2 sqrt p), a={a} b={b}"), u_range, v_range, lam)?;
    let mu = ScalarField2::new(format!("-R/p, a={a} b={b}"), u_range, v_range, move |u, _| {
        Ok(Partials2::separable(&(p(u).recip() * -r), &Jet3::constant(1.0)))
    })?;
    Ok(FieldTriple { lambda, mu, nu })
}

/// Meridian surface carrying the solution family: profile `sqrt(p)`, directrix with
/// spherical curvature `kappa`, and its isotropic chart with closed-form `U`.
pub fn solution_chart(
    a: f64,
    b: f64,
    kappa: SmoothFn1,
    u_range: (f64, f64),
    v_range: (f64, f64),
) -> Result<IsotropicChart> {
    let profile = make_pnmc1(a, b, 0.0, Sign::Plus, u_range)?;
    let curve = SphericalCurve::from_curvature(kappa, v_range, 1e-3)?;
    IsotropicChart::with_arcsine(MeridianSurface::new(profile, curve)?, a, b)
}

/// A named solution of the natural system with its chart and sample grid.
#[derive(Debug, Clone)]
pub struct NaturalExample {
    pub name: String,
    pub a: f64,
    pub b: f64,
    pub fields: FieldTriple,
    pub chart: IsotropicChart,
    pub grid: Grid2,
}

fn example(name: &str, a: f64, b: f64, u_range: (f64, f64), n: usize) -> Result<NaturalExample> {
    let v_range = (0.0, std::f64::consts::TAU);
    let kappa = SmoothFn1::sin_offset(2.0);
    Ok(NaturalExample {
        name: name.to_string(),
        a,
        b,
        fields: solution_family(a, b, kappa.clone(), u_range, v_range)?,
        chart: solution_chart(a, b, kappa, u_range, v_range)?,
        grid: Grid2::new(u_range, n, v_range, n)?,
    })
}

/// `a = 1`, `b = 3`, `kappa = 2 + sin v` on `[-0.9, 2.9] x [0, 2 pi]`.
pub fn example1(n: usize) -> Result<NaturalExample> {
    example("example1", 1.0, 3.0, (-0.9, 2.9), n)
}

/// `a = 5`, `b = 0`, `kappa = 2 + sin v` on `[0.5, 9.5] x [0, 2 pi]`.
pub fn example2(n: usize) -> Result<NaturalExample> {
    example("example2", 5.0, 0.0, (0.5, 9.5), n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_grid() -> Grid2 {
        Grid2::new((0.1, 1.0), 10, (0.1, 1.0), 10).unwrap()
    }

    fn triple(lambda: ScalarField2, mu: ScalarField2, nu: ScalarField2) -> FieldTriple {
        FieldTriple { lambda, mu, nu }
    }

    fn zero() -> ScalarField2 {
        ScalarField2::constant(0.0, (0.0, 1.0), (0.0, 1.0)).unwrap()
    }

    #[test]
    fn constant_mu_leaves_epsilon() {
        let one = ScalarField2::constant(1.0, (0.0, 1.0), (0.0, 1.0)).unwrap();
        for eps in [1, -1] {
            let r = residual_fund(&triple(zero(), one.clone(), zero()), eps, &unit_grid(), 1e-8).unwrap();
            assert!(!r.pass);
            assert_eq!(r.rows[0].max_abs, 0.0);
            assert_eq!(r.rows[1].max_abs, 0.0);
            assert_eq!(r.rows[2].max_abs, 1.0);
        }
        assert!(residual_fund(&triple(zero(), one.clone(), zero()), 0, &unit_grid(), 1e-8).is_err());
    }

    #[test]
    fn vanishing_mu_is_an_error() {
        let t = triple(zero(), zero(), zero());
        assert!(matches!(
            residual_fund(&t, -1, &unit_grid(), 1e-8),
            Err(Error::MuVanishes { .. })
        ));
    }

    #[test]
    fn degenerate_separable_and_not() {
        let mu = ScalarField2::separable(
            "exp(u) cos(v)",
            SmoothFn1::new("exp", crate::diffkit::Interval::REAL_LINE, |u| u.exp()),
            SmoothFn1::new("cos", crate::diffkit::Interval::REAL_LINE, |v| v.cos()),
            (0.0, 1.0),
            (0.0, 1.0),
        )
        .unwrap();
        let r = residual_degenerate(&triple(zero(), mu, zero()), &unit_grid(), 1e-12).unwrap();
        assert!(r.pass, "{r:?}");

        let one = ScalarField2::constant(1.0, (0.0, 1.0), (0.0, 1.0)).unwrap();
        let mu = ScalarField2::new("exp(-uv)", (0.0, 1.0), (0.0, 1.0), |u, v| {
            let e = (-u * v).exp();
            Ok(Partials2 {
                value: e,
                u: -v * e,
                v: -u * e,
                uu: v * v * e,
                uv: (u * v - 1.0) * e,
                vv: u * u * e,
            })
        })
        .unwrap();
        let r = residual_degenerate(&triple(zero(), mu, one), &unit_grid(), 1e-8).unwrap();
        assert!(!r.pass);
        // |mu| (ln|mu|)_uv + 1 = 1 - exp(-uv), largest at the far corner
        assert!((r.rows[1].max_abs - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn solution_family_closed_forms() {
        let ex = example1(8).unwrap();
        for (u, v) in [(0.0, 0.0), (1.5, 2.0), (-0.5, 4.0)] {
            let l = ex.fields.lambda.eval(u, v).unwrap();
            let n = ex.fields.nu.eval(u, v).unwrap();
            let m = ex.fields.mu.eval(u, v).unwrap();
            assert_eq!(l, n);
            let p: f64 = -u * u + 2.0 * u + 3.0;
            assert!((l.value - (2.0 + v.sin()) / (2.0 * p.sqrt())).abs() < 1e-15);
            assert!((m.value - 2.0 / (u * u - 2.0 * u - 3.0)).abs() < 1e-14);
        }
        let ex = example2(8).unwrap();
        let m = ex.fields.mu.eval(3.0, 1.0).unwrap();
        assert!((m.value - 5.0 / (3.0 * (3.0 - 10.0))).abs() < 1e-15);
        assert!(solution_family(0.0, -1.0, SmoothFn1::constant(1.0), (0.0, 0.1), (0.0, 1.0)).is_err());
    }

    #[test]
    fn first_two_equations_hold_in_the_chart() {
        let ex = example1(12).unwrap();
        let r = residual_syst1(&ex.fields, &ex.chart, &ex.grid, 1e-8).unwrap();
        assert!(r.rows[0].max_abs <= 1e-10, "{r:?}");
        assert!(r.rows[1].max_abs <= 1e-10, "{r:?}");
    }

    #[test]
    fn unit_radius_family_satisfies_syst1() {
        let kappa = SmoothFn1::sin_offset(2.0);
        let (ur, vr) = ((-0.9, 0.9), (0.0, std::f64::consts::TAU));
        let fields = solution_family(0.0, 1.0, kappa.clone(), ur, vr).unwrap();
        let chart = solution_chart(0.0, 1.0, kappa, ur, vr).unwrap();
        let grid = Grid2::new(ur, 20, vr, 20).unwrap();
        let r = residual_syst1(&fields, &chart, &grid, 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
    }
}
