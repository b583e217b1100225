//! Geometry of curves on the elliptical 2-sphere `a1 x² + a2 y² + a3 z² = 1`.
//!
//! The crate is organised bottom-up:
//!
//! - [`metric`]: the weighted inner product, its cross product and rotations.
//! - [`numerics`]: adaptive integration, finite differences, arclength.
//! - [`curve`]: closed-form and sampled parametric curves.
//! - [`darboux`]: tangent/position/side frames, geodesic curvature and
//!   curves synthesised from a curvature profile.
//! - [`magnetic`]: Lorentz forces of Killing fields and their trajectories.
//! - [`families`]: helices, satellite curves, cycloids and constant-curvature
//!   circles.
//! - [`export`], [`verify`], [`gallery`]: files, checks and figure sets.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod darboux;
pub mod error;
pub mod export;
pub mod families;
pub mod gallery;
pub mod magnetic;
pub mod metric;
pub mod numerics;
pub mod verify;

pub use curve::{Curve, CurveForm, Jet, SampledCurve};
pub use darboux::{CurvatureProfile, DarbouxFrame};
pub use error::{Error, Result};
pub use magnetic::{HelixField, KillingField};
pub use metric::{EllipticMetric, Matrix3, RotationSpec, Vec3};
pub use verify::{Check, VerificationReport};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
