//! Classical particle systems on fiber bundles.
//!
//! Charge-monopole motion, spinning particles, Wong particles in Yang-Mills
//! backgrounds and Kaluza-Klein particles, together with the Hopf-bundle
//! sections, Poisson-bracket engine, Grassmann algebra and flux checks that
//! the conservation laws and quantization conditions rest on.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bundle;
pub mod canonical;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod fluxaction;
pub mod grassmann;
pub mod integrate;
pub mod liealg;

pub use error::{Error, Result};

/// Euclidean 3-vector used for positions, velocities and field values.
pub type Vec3 = nalgebra::Vector3<f64>;
/// Minkowski 4-vector, components ordered (0, 1, 2, 3) with η = diag(−1, 1, 1, 1).
pub type Vec4 = nalgebra::Vector4<f64>;
