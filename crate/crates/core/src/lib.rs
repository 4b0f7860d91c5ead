//! Numerical toolkit for amorphic complexity of dynamical systems.

pub mod error;
pub mod real;
pub mod symbolic;
pub mod systems;
pub mod format;
pub mod sampling;
pub mod separation;
pub mod scaling;
pub mod besicovitch;
pub mod pinched;

pub use error::{Error, Result};
