//! Timelike meridian surfaces of elliptic type in Minkowski 4-space.
//!
//! A meridian surface is the immersion `z(u,v) = f(u) l(v) + g(u) e4`, where
//! `(f, g)` is a meridian profile with `f'^2 - g'^2 = -1` and `l` is an
//! arc-length curve on the unit sphere of `span{e1,e2,e3}`. This crate builds
//! such surfaces, evaluates their invariants from order-3 jets, constructs the
//! classified families (flat, constant Gauss curvature, minimal, CMC, parallel
//! mean curvature, parallel normalized mean curvature) and checks candidate
//! solutions of the natural PDE systems by residuals.
//!
//! Module map:
//!
//! * [`minkowski`]: the inner product of signature (3,1), causal character, frame checks.
//! * [`diffkit`]: truncated Taylor jets, smooth scalar functions, RK4 profiles, quadrature.
//! * [`geometry`]: spherical directrices, meridian profiles, surfaces and their invariants.
//! * [`families`]: constructors for every classified family and the property verifier.
//! * [`natural_pde`]: isotropic charts, geometric frame functions, PDE residuals.
//! * [`selfcheck`]: the full invariant suite as a table of pass/fail rows.

// `!(x > 0.0)` guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#![forbid(unsafe_code)]

pub mod diffkit;
mod error;
pub mod families;
pub mod geometry;
pub mod grid;
pub mod minkowski;
pub mod natural_pde;
pub mod selfcheck;

pub use error::{Error, Result};
