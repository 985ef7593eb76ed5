//! Jets, smooth scalar functions, fixed-step profile integration and quadrature.

mod fd;
mod jet;
mod ode;
mod quadrature;
mod smooth;

pub use fd::{central_5pt, fd_check};
pub use jet::{Dual, Jet, Jet2, Jet3};
pub use ode::{
    integrate_profile, integrate_profile_with_bound, profile_jet_from_phi, OdeNode, OdeSolution,
    StopEvent, StopReason, DEFAULT_OVERFLOW_BOUND,
};
pub use quadrature::quadrature;
pub(crate) use quadrature::integrate_values;
pub use smooth::{Interval, SmoothFn1};
