use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("{what} = {value} is outside the domain {domain}")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        domain: String,
    },
    #[error("initial state {0} is not admissible for the generating function")]
    InvalidInitialState(f64),
    #[error("step size must be positive, got {0}")]
    StepSizeNonpositive(f64),
    #[error("integration interval [{a}, {b}] is not inside the domain {domain}")]
    IntervalOutsideDomain { a: f64, b: f64, domain: String },
    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    ToleranceNotReached { tol: f64, estimate: f64 },
    #[error("profile function f is not positive: {0}")]
    NonpositiveProfile(String),
    #[error("empty parameter interval: {0}")]
    EmptyInterval(String),
    #[error("radicand is negative: {0}")]
    RadicandNegative(String),
    #[error("parameter conflict: {0}")]
    ParameterConflict(String),
    #[error("mean curvature vector vanishes at (u, v) = ({u}, {v})")]
    MinimalPoint { u: f64, v: f64 },
    #[error("mu vanishes at (u, v) = ({u}, {v})")]
    MuVanishes { u: f64, v: f64 },
    #[error("chart is not valid at u = {0}")]
    ChartDomain(f64),
    #[error("invalid spherical curve: {0}")]
    InvalidCurve(String),
    #[error("invalid meridian profile: {0}")]
    InvalidProfile(String),
    #[error("invalid scalar field {name}: {reason}")]
    InvalidField { name: String, reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
