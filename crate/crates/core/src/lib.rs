//! Curvature of surfaces in simply isotropic 3-space.
//!
//! Second-order jets give exact derivatives of the height fields, from which
//! the isotropic Gaussian curvature `K` and mean curvature `H` are evaluated
//! for Monge charts of either orientation and for parametric surfaces. On
//! top of that sit the affine factorable surfaces of both types, a catalog of
//! the classified constant-curvature families and a verification layer that
//! checks each claim numerically.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod factorable;
pub mod geometry;
pub mod jets;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
