//! Run configuration and the string selectors it accepts.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use meridian::diffkit::SmoothFn1;
use meridian::families::{default_grid, FamilySpec};
use meridian::geometry::SphericalCurve;
use meridian::grid::Grid2;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const DEFAULT_GRID_N: usize = 50;
pub const DEFAULT_VERIFY_TOL: f64 = 1e-6;
pub const DEFAULT_PDE_TOL: f64 = 1e-8;
/// Step used when a directrix is integrated from a non-constant curvature.
pub const CURVE_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Obj,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Obj => "obj",
        }
    }
}

/// A curvature function of `v`: `const:k`, `sin-offset:c` or `poly:c0,c1,...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum KappaSelector {
    Const(f64),
    SinOffset(f64),
    Poly(Vec<f64>),
}

fn parse_number(s: &str, what: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("{what}: `{s}` is not a finite number"))
}

impl FromStr for KappaSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, arg) = s.split_once(':').ok_or_else(|| format!("curvature selector `{s}` has no `:`"))?;
        match kind {
            "const" => Ok(KappaSelector::Const(parse_number(arg, "const")?)),
            "sin-offset" => Ok(KappaSelector::SinOffset(parse_number(arg, "sin-offset")?)),
            "poly" => {
                let coeffs = arg
                    .split(',')
                    .map(|c| parse_number(c, "poly"))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(KappaSelector::Poly(coeffs))
            }
            _ => Err(format!("unknown curvature selector `{kind}`")),
        }
    }
}

impl TryFrom<String> for KappaSelector {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<KappaSelector> for String {
    fn from(k: KappaSelector) -> String {
        k.to_string()
    }
}

impl fmt::Display for KappaSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KappaSelector::Const(k) => write!(f, "const:{k}"),
            KappaSelector::SinOffset(c) => write!(f, "sin-offset:{c}"),
            KappaSelector::Poly(cs) => {
                let parts: Vec<String> = cs.iter().map(f64::to_string).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}

impl KappaSelector {
    pub fn to_fn(&self) -> SmoothFn1 {
        match self {
            KappaSelector::Const(k) => SmoothFn1::constant(*k),
            KappaSelector::SinOffset(c) => SmoothFn1::sin_offset(*c),
            KappaSelector::Poly(cs) => SmoothFn1::polynomial(cs.clone()),
        }
    }
}

/// Directrix choice: `great-circle` or any curvature selector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DirectrixSelector {
    GreatCircle,
    Curvature(KappaSelector),
}

impl FromStr for DirectrixSelector {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "great-circle" {
            Ok(DirectrixSelector::GreatCircle)
        } else {
            s.parse().map(DirectrixSelector::Curvature)
        }
    }
}

impl TryFrom<String> for DirectrixSelector {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<DirectrixSelector> for String {
    fn from(d: DirectrixSelector) -> String {
        match d {
            DirectrixSelector::GreatCircle => "great-circle".to_string(),
            DirectrixSelector::Curvature(k) => k.to_string(),
        }
    }
}

impl DirectrixSelector {
    /// Constant curvatures use the closed-form latitude circle; the rest are integrated over `v_range`.
    pub fn build(&self, v_range: (f64, f64)) -> meridian::Result<SphericalCurve> {
        match self {
            DirectrixSelector::GreatCircle => Ok(SphericalCurve::great_circle()),
            DirectrixSelector::Curvature(KappaSelector::Const(k)) => SphericalCurve::with_constant_curvature(*k),
            DirectrixSelector::Curvature(k) => SphericalCurve::from_curvature(k.to_fn(), v_range, CURVE_STEP),
        }
    }
}

/// Which field triple `pde` checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SolutionSelector {
    Example1,
    Example2,
    Family { a: f64, b: f64 },
    /// `lambda = nu = 0`, `mu = e^u (2 + sin v)`.
    ZeroSeparable,
}

impl FromStr for SolutionSelector {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "example1" => Ok(SolutionSelector::Example1),
            "example2" => Ok(SolutionSelector::Example2),
            "zero-separable" => Ok(SolutionSelector::ZeroSeparable),
            _ => {
                let inner = s
                    .strip_prefix("family(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| format!("unknown solution `{s}`"))?;
                let (a, b) = inner.split_once(',').ok_or_else(|| format!("`{s}` needs two arguments"))?;
                Ok(SolutionSelector::Family {
                    a: parse_number(a, "family a")?,
                    b: parse_number(b, "family b")?,
                })
            }
        }
    }
}

impl TryFrom<String> for SolutionSelector {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<SolutionSelector> for String {
    fn from(s: SolutionSelector) -> String {
        match s {
            SolutionSelector::Example1 => "example1".into(),
            SolutionSelector::Example2 => "example2".into(),
            SolutionSelector::Family { a, b } => format!("family({a},{b})"),
            SolutionSelector::ZeroSeparable => "zero-separable".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemSelector {
    Fund,
    Syst1,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdeConfig {
    pub solution: SolutionSelector,
    pub system: SystemSelector,
    /// Only read by `fund`; `syst1` fixes it to -1.
    #[serde(default = "minus_one")]
    pub epsilon: i8,
    /// Defaults to `sin-offset:2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<KappaSelector>,
    /// Scales both isotropic coordinates of the chart.
    #[serde(default = "one")]
    pub chart_scale: f64,
}

fn minus_one() -> i8 {
    -1
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    /// Defaults to the family's own directrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directrix: Option<DirectrixSelector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pde: Option<PdeConfig>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks everything that can be checked without evaluating the surface.
    pub fn validate(&self) -> CliResult<()> {
        if let Some(t) = self.tol {
            check_tol(t)?;
        }
        if let Some(g) = &self.grid {
            g.validate().map_err(|e| CliError::config(e.to_string()))?;
        }
        if let Some(spec) = &self.family {
            if !(spec.u_min < spec.u_max) {
                return Err(CliError::config(format!("family range [{}, {}] is empty", spec.u_min, spec.u_max)));
            }
            if let Some(g) = &self.grid {
                if g.u_min < spec.u_min || g.u_max > spec.u_max {
                    return Err(CliError::config(format!(
                        "grid u range [{}, {}] is not inside the family range [{}, {}]",
                        g.u_min, g.u_max, spec.u_min, spec.u_max
                    )));
                }
            }
        }
        if let Some(p) = &self.pde {
            if p.system == SystemSelector::Fund && p.epsilon.abs() != 1 {
                return Err(CliError::config(format!("epsilon must be 1 or -1, got {}", p.epsilon)));
            }
            if !(p.chart_scale > 0.0 && p.chart_scale.is_finite()) {
                return Err(CliError::config(format!("chart_scale must be positive, got {}", p.chart_scale)));
            }
        }
        Ok(())
    }

    pub fn family(&self) -> CliResult<&FamilySpec> {
        self.family.as_ref().ok_or_else(|| CliError::config("this command needs a `family` entry"))
    }

    pub fn pde(&self) -> CliResult<&PdeConfig> {
        self.pde.as_ref().ok_or_else(|| CliError::config("this command needs a `pde` entry"))
    }

    /// The configured grid, or the family default.
    pub fn surface_grid(&self) -> CliResult<Grid2> {
        match self.grid {
            Some(g) => Ok(g),
            None => Ok(default_grid(self.family()?, DEFAULT_GRID_N)?),
        }
    }

    pub fn build_surface(&self) -> CliResult<meridian::geometry::MeridianSurface> {
        let spec = self.family()?;
        let surface = match &self.directrix {
            None => spec.build_surface()?,
            Some(d) => {
                let g = self.surface_grid()?;
                spec.build_surface_with(d.build((g.v_min, g.v_max))?)?
            }
        };
        Ok(surface)
    }
}

pub fn check_tol(t: f64) -> CliResult<f64> {
    if t > 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(CliError::config(format!("tolerance must be positive, got {t}")))
    }
}
