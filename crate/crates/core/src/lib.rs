//! Masses and exterior mode analysis for ALF metrics: model circle
//! fibrations, closed-form metric families, boundary-integral masses and
//! separated radial solvers.
#![no_std]

#[cfg(test)]
extern crate std;

extern crate alloc;

pub mod error;
pub mod geometry;
pub mod mass;
pub mod modes;
pub mod numeric;
pub mod zoo;

pub use error::{Error, Result};
