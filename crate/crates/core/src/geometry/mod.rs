//! Spherical directrices, meridian profiles and meridian surfaces.

mod curve;
mod profile;
mod surface;

pub use curve::{CurveJet, SphericalCurve};
pub use profile::{g_jet_from_f, MeridianProfile, ProfileJet, Sign};
pub use surface::{
    CausalFlags, FirstForm, FrameAtPoint, GaussCurvature, InvariantReport, MeanCurvature,
    MeridianSurface, NormalDerivative, NormalFrameDerivatives, NormalPair, PointJets,
    SurfaceJet, MINIMAL_POINT_TOL,
};
