//! Phase-space numerics for exact Schrödinger solutions in electromagnetic
//! fields: wave functions and potentials, the standard Wigner and the
//! gauge-invariant Weyl–Stratonovich transforms, observables, and truncated
//! Moyal-series dynamics.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`). The unsuffixed aliases below fix `f64`.

pub mod error;
pub mod moyal;
pub mod numerics;
pub mod observables;
pub mod phase_model;
pub mod scalar;
pub mod transforms;
pub mod vec3;

pub use error::{Error, Result};
pub use phase_model::{ModelParams, PhasePoint, SystemVariant};
pub use scalar::Real;
pub use transforms::{TransformSpec, TransformValue, WignerKind};
pub use vec3::Vec3;

pub type Params = ModelParams<f64>;
pub type Vector = Vec3<f64>;
pub type Point = PhasePoint<f64>;
pub type Params32 = ModelParams<f32>;
pub type Vector32 = Vec3<f32>;
pub type Point32 = PhasePoint<f32>;
