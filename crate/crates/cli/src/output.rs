//! Per-vertex sampling and the CSV / OBJ / JSON writers.

use std::io::Write;
use std::path::{Path, PathBuf};

use meridian::geometry::MeridianSurface;
use meridian::grid::Grid2;
use meridian::natural_pde::{geometric_functions, GeometricFunctions};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliResult;

/// One grid vertex. Field order is the CSV column order.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceRow {
    pub u: f64,
    pub v: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "Kperp")]
    pub k_perp: f64,
    pub h1: f64,
    pub h2: f64,
    #[serde(rename = "Hnormsq")]
    pub h_norm_sq: f64,
    #[serde(rename = "H_causal")]
    pub h_causal: String,
    /// `NaN` where `H` vanishes and `H0` is undefined.
    #[serde(rename = "DH0_max")]
    pub dh0_max: f64,
}

fn sample_point(surface: &MeridianSurface, u: f64, v: f64) -> meridian::Result<SurfaceRow> {
    let z = surface.evaluate(u, v)?.z;
    let r = surface.invariant_report(u, v)?;
    let dh0_max = match surface.normal_derivative_h0(u, v) {
        Ok(d) => d.max_abs(),
        Err(meridian::Error::MinimalPoint { .. }) => f64::NAN,
        Err(e) => return Err(e),
    };
    Ok(SurfaceRow {
        u,
        v,
        x1: z.x1,
        x2: z.x2,
        x3: z.x3,
        x4: z.x4,
        e: r.e,
        f: r.f,
        g: r.g,
        k: r.k,
        k_perp: r.k_perp,
        h1: r.h1,
        h2: r.h2,
        h_norm_sq: r.h_norm_sq,
        h_causal: r.causal.mean_curvature.to_string(),
        dh0_max,
    })
}

/// Rows in grid order (`u` outer, `v` inner).
pub fn sample_surface(surface: &MeridianSurface, grid: &Grid2) -> meridian::Result<Vec<SurfaceRow>> {
    grid.points()
        .into_par_iter()
        .map(|(u, v)| sample_point(surface, u, v))
        .collect()
}

/// Grid point plus the nine isotropic-frame functions, flat for CSV.
#[derive(Debug, Clone, Serialize)]
pub struct GeomRow {
    pub u: f64,
    pub v: f64,
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

impl GeomRow {
    fn new(u: f64, v: f64, g: GeometricFunctions) -> Self {
        Self {
            u,
            v,
            gamma1: g.gamma1,
            gamma2: g.gamma2,
            nu: g.nu,
            lambda1: g.lambda1,
            mu1: g.mu1,
            lambda2: g.lambda2,
            mu2: g.mu2,
            beta1: g.beta1,
            beta2: g.beta2,
        }
    }

    pub fn functions(&self) -> GeometricFunctions {
        GeometricFunctions {
            gamma1: self.gamma1,
            gamma2: self.gamma2,
            nu: self.nu,
            lambda1: self.lambda1,
            mu1: self.mu1,
            lambda2: self.lambda2,
            mu2: self.mu2,
            beta1: self.beta1,
            beta2: self.beta2,
        }
    }
}

pub fn sample_geometric_functions(surface: &MeridianSurface, grid: &Grid2) -> meridian::Result<Vec<GeomRow>> {
    grid.points()
        .into_par_iter()
        .map(|(u, v)| Ok(GeomRow::new(u, v, geometric_functions(surface, u, v)?)))
        .collect()
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer_pretty(file, value)?;
    Ok(())
}

/// Vertex `(x1, x2, x3, x4)` is written as `(x1, x4, x2)` so the time axis is up.
/// Faces are the grid quads, 1-based, counter-clockwise in `(u, v)`.
pub fn write_obj(path: &Path, rows: &[SurfaceRow], grid: &Grid2) -> CliResult<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    for r in rows {
        writeln!(w, "v {} {} {}", r.x1, r.x4, r.x2)?;
    }
    let idx = |i: usize, j: usize| i * grid.nv + j + 1;
    for i in 0..grid.nu - 1 {
        for j in 0..grid.nv - 1 {
            writeln!(w, "f {} {} {} {}", idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn ensure_dir(dir: &Path) -> CliResult<PathBuf> {
    std::fs::create_dir_all(dir)?;
    Ok(dir.to_path_buf())
}
