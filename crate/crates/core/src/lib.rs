//! Deciders for PSI and strong PSI morphisms of finitely presented
//! commutative rings.

pub mod error;
pub mod cli;
pub mod deduce;
pub mod finring;
pub mod kernel;
pub mod psi;
pub mod rings;

pub use error::{Error, Result};
