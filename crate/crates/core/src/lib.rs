//! Pseudospectral convex-integration workbench for stationary even active
//! scalar equations on the 2-torus.

pub mod error;
pub mod feasibility;
pub mod forced;
pub mod harness;
pub mod multiplier;
pub mod params;
pub mod stress;
pub mod torus;
pub mod unforced;
pub mod verify;
pub mod wave;

pub use error::{Error, Result};
