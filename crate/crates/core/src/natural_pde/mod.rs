//! Isotropic parametrization, the geometric frame with its nine functions, and
//! residual checks for the natural PDE systems of surfaces with parallel
//! normalized mean curvature vector.

mod chart;
mod fields;
mod frame;
mod residual;

pub use chart::{BarredPartials, IsotropicChart, UMap};
pub use fields::{FieldTriple, Partials2, ScalarField2, FD_AUDIT_TOL};
pub use frame::{
    closed_geometric_functions_pnmc1, closed_geometric_functions_pnmc2, geometric_functions,
    isotropic_frame, mean_curvature_in_frame, GeometricFunctions, IsotropicFrame,
};
pub use residual::{
    example1, example2, residual_degenerate, residual_fund, residual_fund_in_chart,
    residual_syst1, solution_chart, solution_family, NaturalExample, ResidualReport, ResidualRow,
    MU_FLOOR,
};
