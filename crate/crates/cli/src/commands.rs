//! Subcommand bodies. Each returns whether its property held; errors carry their exit code.

use std::f64::consts::TAU;
use std::io::Write;
use std::path::{Path, PathBuf};

use meridian::families::{verify_family, verify_property, FamilyParams, FamilyProperty, FamilyVerdict};
use meridian::geometry::MeridianSurface;
use meridian::grid::Grid2;
use meridian::natural_pde::{
    closed_geometric_functions_pnmc1, closed_geometric_functions_pnmc2, example1, example2, residual_degenerate,
    residual_fund, residual_syst1, solution_chart, solution_family, FieldTriple, GeometricFunctions,
    IsotropicChart, Partials2, ResidualReport, ScalarField2,
};
use meridian::selfcheck::run_selfcheck;
use serde::Serialize;

use crate::config::{
    check_tol, KappaSelector, OutputFormat, RunConfig, SolutionSelector, SystemSelector, DEFAULT_GRID_N,
    DEFAULT_PDE_TOL, DEFAULT_VERIFY_TOL,
};
use crate::error::{CliError, CliResult};
use crate::output::{
    ensure_dir, sample_geometric_functions, sample_surface, write_csv, write_json, write_obj, SurfaceRow,
};

/// Command-line overrides shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub format: Option<OutputFormat>,
}

impl Overrides {
    fn out_dir(&self, cfg: &RunConfig) -> CliResult<PathBuf> {
        let dir = self.out.clone().or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("."));
        ensure_dir(&dir)
    }

    fn tol(&self, cfg: &RunConfig, default: f64) -> CliResult<f64> {
        check_tol(self.tol.or(cfg.tol).unwrap_or(default))
    }

    fn format(&self, cfg: &RunConfig, default: OutputFormat) -> OutputFormat {
        self.format.or(cfg.format).unwrap_or(default)
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn print_text(text: &str) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    print_text(&(serde_json::to_string_pretty(value)? + "\n"))
}

fn nan_max(values: impl Iterator<Item = f64>) -> Option<f64> {
    values.filter(|x| !x.is_nan()).fold(None, |m, x| Some(m.map_or(x, |m: f64| m.max(x))))
}

#[derive(Serialize)]
struct SurfaceSummary<'a> {
    config: &'a RunConfig,
    grid: Grid2,
    vertices: usize,
    max_abs_k: Option<f64>,
    max_abs_k_perp: Option<f64>,
    max_h_norm_sq: Option<f64>,
    /// `None` when `H` vanishes everywhere.
    max_dh0: Option<f64>,
    files: Vec<PathBuf>,
}

impl<'a> SurfaceSummary<'a> {
    fn new(config: &'a RunConfig, grid: Grid2, rows: &[SurfaceRow], files: Vec<PathBuf>) -> Self {
        Self {
            config,
            grid,
            vertices: rows.len(),
            max_abs_k: nan_max(rows.iter().map(|r| r.k.abs())),
            max_abs_k_perp: nan_max(rows.iter().map(|r| r.k_perp.abs())),
            max_h_norm_sq: nan_max(rows.iter().map(|r| r.h_norm_sq)),
            max_dh0: nan_max(rows.iter().map(|r| r.dh0_max)),
            files,
        }
    }
}

#[derive(Serialize)]
struct SurfaceDump<'a> {
    config: &'a RunConfig,
    grid: Grid2,
    rows: &'a [SurfaceRow],
}

fn write_surface(
    dir: &Path,
    format: OutputFormat,
    cfg: &RunConfig,
    grid: &Grid2,
    rows: &[SurfaceRow],
) -> CliResult<PathBuf> {
    let path = dir.join(format!("surface.{}", format.extension()));
    match format {
        OutputFormat::Csv => write_csv(&path, rows)?,
        OutputFormat::Json => write_json(&path, &SurfaceDump { config: cfg, grid: *grid, rows })?,
        OutputFormat::Obj => write_obj(&path, rows, grid)?,
    }
    Ok(path)
}

/// Samples the surface and writes `surface.csv`, plus `surface.json` or `surface.obj` when asked.
pub fn generate(cfg: &RunConfig, ov: &Overrides) -> CliResult<bool> {
    let grid = cfg.surface_grid()?;
    let surface = cfg.build_surface()?;
    let rows = sample_surface(&surface, &grid)?;
    let dir = ov.out_dir(cfg)?;
    let mut files = vec![write_surface(&dir, OutputFormat::Csv, cfg, &grid, &rows)?];
    let format = ov.format(cfg, OutputFormat::Csv);
    if format != OutputFormat::Csv {
        files.push(write_surface(&dir, format, cfg, &grid, &rows)?);
    }
    print_json(&SurfaceSummary::new(cfg, grid, &rows, files))?;
    Ok(true)
}

/// Writes a single `surface.<ext>` file, OBJ by default.
pub fn export(cfg: &RunConfig, ov: &Overrides) -> CliResult<bool> {
    let grid = cfg.surface_grid()?;
    let surface = cfg.build_surface()?;
    let rows = sample_surface(&surface, &grid)?;
    let dir = ov.out_dir(cfg)?;
    let path = write_surface(&dir, ov.format(cfg, OutputFormat::Obj), cfg, &grid, &rows)?;
    print_json(&SurfaceSummary::new(cfg, grid, &rows, vec![path]))?;
    Ok(true)
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    config: &'a RunConfig,
    family: &'static str,
    verdicts: Vec<FamilyVerdict>,
    pass: bool,
}

/// The family's own property, plus constant `|H|` for the parallel-mean-curvature families.
pub fn verify(cfg: &RunConfig, ov: &Overrides) -> CliResult<bool> {
    let spec = cfg.family()?;
    let grid = cfg.surface_grid()?;
    let tol = ov.tol(cfg, DEFAULT_VERIFY_TOL)?;
    let surface = cfg.build_surface()?;
    let mut verdicts = vec![verify_family(&surface, spec, &grid, tol)?];
    if let Some(norm) = spec.parallel_h_norm() {
        verdicts.push(verify_property(&surface, FamilyProperty::ConstantMeanCurvature(norm), &grid, tol)?);
    }
    let pass = verdicts.iter().all(|v| v.pass);
    let out = VerifyOutput { config: cfg, family: spec.tag(), verdicts, pass };
    if let Some(dir) = ov.out.clone().or_else(|| cfg.out.clone()) {
        write_json(&ensure_dir(&dir)?.join("verdict.json"), &out)?;
    }
    print_json(&out)?;
    Ok(pass)
}

#[derive(Serialize)]
struct ClosedComparison {
    /// `max |numeric - closed|` per function, in `GeometricFunctions::NAMES` order.
    max_abs_diff: Vec<(&'static str, f64)>,
    tol: f64,
    pass: bool,
}

#[derive(Serialize)]
struct GeomSummary<'a> {
    config: &'a RunConfig,
    grid: Grid2,
    file: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<ClosedComparison>,
}

fn closed_form_at(
    params: &FamilyParams,
    surface: &MeridianSurface,
    u: f64,
) -> Option<meridian::Result<GeometricFunctions>> {
    match *params {
        FamilyParams::Pnmc1 { a, b, kappa, .. } => Some(closed_geometric_functions_pnmc1(a, b, kappa, u)),
        FamilyParams::Pnmc2 { a, c, kappa, .. } => {
            Some(surface.profile().f_jet(u).and_then(|f| closed_geometric_functions_pnmc2(c, a, kappa, &f)))
        }
        _ => None,
    }
}

/// Numeric geometric functions on the grid; PNMC families are also compared with their closed forms.
pub fn geomfuncs(cfg: &RunConfig, ov: &Overrides) -> CliResult<bool> {
    let spec = cfg.family()?;
    let grid = cfg.surface_grid()?;
    let format = ov.format(cfg, OutputFormat::Csv);
    if format == OutputFormat::Obj {
        return Err(CliError::config("geomfuncs writes csv or json"));
    }
    let surface = cfg.build_surface()?;
    let rows = sample_geometric_functions(&surface, &grid)?;
    let dir = ov.out_dir(cfg)?;
    let file = dir.join(format!("geomfuncs.{}", format.extension()));
    match format {
        OutputFormat::Csv => write_csv(&file, &rows)?,
        OutputFormat::Json => write_json(&file, &rows)?,
        OutputFormat::Obj => unreachable!("rejected above"),
    }
    let closed_form = if cfg.directrix.is_none() {
        let tol = ov.tol(cfg, DEFAULT_VERIFY_TOL)?;
        let mut worst = [0.0_f64; 9];
        let mut any = false;
        for r in &rows {
            let Some(closed) = closed_form_at(&spec.params, &surface, r.u) else { break };
            any = true;
            for (w, d) in worst.iter_mut().zip(r.functions().abs_diff(&closed?)) {
                *w = if d.is_nan() { f64::INFINITY } else { w.max(d) };
            }
        }
        any.then(|| ClosedComparison {
            max_abs_diff: GeometricFunctions::NAMES.iter().copied().zip(worst).collect(),
            tol,
            pass: worst.iter().all(|w| *w <= tol),
        })
    } else {
        None
    };
    let pass = closed_form.as_ref().is_none_or(|c| c.pass);
    print_json(&GeomSummary { config: cfg, grid, file, closed_form })?;
    Ok(pass)
}

struct PdeInput {
    fields: FieldTriple,
    chart: Option<IsotropicChart>,
    grid: Grid2,
}

fn zero_separable(grid: &Grid2) -> meridian::Result<FieldTriple> {
    let ur = (grid.u_min, grid.u_max);
    let vr = (grid.v_min, grid.v_max);
    let zero = ScalarField2::constant(0.0, ur, vr)?;
    let mu = ScalarField2::new("exp(u) (2 + sin v)", ur, vr, |u, v| {
        let (e, s, c) = (u.exp(), 2.0 + v.sin(), v.cos());
        Ok(Partials2 { value: e * s, u: e * s, v: e * c, uu: e * s, uv: e * c, vv: -e * v.sin() })
    })?;
    Ok(FieldTriple { lambda: zero.clone(), mu, nu: zero })
}

fn family_input(a: f64, b: f64, kappa: &KappaSelector, grid: Grid2) -> meridian::Result<PdeInput> {
    let ur = (grid.u_min, grid.u_max);
    let vr = (grid.v_min, grid.v_max);
    Ok(PdeInput {
        fields: solution_family(a, b, kappa.to_fn(), ur, vr)?,
        chart: Some(solution_chart(a, b, kappa.to_fn(), ur, vr)?),
        grid,
    })
}

fn pde_input(cfg: &RunConfig) -> CliResult<PdeInput> {
    let pde = cfg.pde()?;
    let kappa = pde.kappa.clone().unwrap_or(KappaSelector::SinOffset(2.0));
    let input = match pde.solution {
        SolutionSelector::Example1 | SolutionSelector::Example2 => {
            let ex = if pde.solution == SolutionSelector::Example1 {
                example1(DEFAULT_GRID_N)?
            } else {
                example2(DEFAULT_GRID_N)?
            };
            let grid = cfg.grid.unwrap_or(ex.grid);
            if pde.kappa.is_none() && cfg.grid.is_none() {
                PdeInput { fields: ex.fields, chart: Some(ex.chart), grid }
            } else {
                family_input(ex.a, ex.b, &kappa, grid)?
            }
        }
        SolutionSelector::Family { a, b } => {
            let r2 = a * a + b;
            if !(r2 > 0.0) {
                return Err(CliError::config(format!("family({a},{b}) needs a^2 + b > 0")));
            }
            let r = r2.sqrt();
            let grid = match cfg.grid {
                Some(g) => g,
                None => Grid2::new((a - 0.9 * r, a + 0.9 * r), DEFAULT_GRID_N, (0.0, TAU), DEFAULT_GRID_N)?,
            };
            if grid.u_min <= a - r || grid.u_max >= a + r {
                return Err(CliError::config(format!(
                    "grid u range [{}, {}] must lie inside ({}, {})",
                    grid.u_min,
                    grid.u_max,
                    a - r,
                    a + r
                )));
            }
            family_input(a, b, &kappa, grid)?
        }
        SolutionSelector::ZeroSeparable => {
            let grid = match cfg.grid {
                Some(g) => g,
                None => Grid2::new((0.0, 1.0), DEFAULT_GRID_N, (0.0, TAU), DEFAULT_GRID_N)?,
            };
            PdeInput { fields: zero_separable(&grid)?, chart: None, grid }
        }
    };
    Ok(input)
}

#[derive(Serialize)]
struct PdeOutput<'a> {
    config: &'a RunConfig,
    report: ResidualReport,
}

/// Residuals of the selected field triple in the selected system.
pub fn pde(cfg: &RunConfig, ov: &Overrides) -> CliResult<bool> {
    let sel = cfg.pde()?;
    let tol = ov.tol(cfg, DEFAULT_PDE_TOL)?;
    let input = pde_input(cfg)?;
    let report = match sel.system {
        SystemSelector::Fund => residual_fund(&input.fields, sel.epsilon, &input.grid, tol)?,
        SystemSelector::Degenerate => residual_degenerate(&input.fields, &input.grid, tol)?,
        SystemSelector::Syst1 => {
            let chart = input
                .chart
                .ok_or_else(|| CliError::config("syst1 needs a solution with an isotropic chart"))?
                .with_scale(sel.chart_scale)?;
            residual_syst1(&input.fields, &chart, &input.grid, tol)?
        }
    };
    let pass = report.pass;
    let out = PdeOutput { config: cfg, report };
    if let Some(dir) = ov.out.clone().or_else(|| cfg.out.clone()) {
        write_json(&ensure_dir(&dir)?.join("residual.json"), &out)?;
    }
    print_json(&out)?;
    Ok(pass)
}

pub fn selfcheck() -> CliResult<bool> {
    let report = run_selfcheck()?;
    print_text(&report.to_string())?;
    Ok(report.pass)
}
