//! Pairwise-summation (PWS) and exact scattering-theory Casimir energies for
//! atom–slab, slab–slab and sphere–slab geometries, in reduced units
//! `ħ = c = 1`.

pub mod cli;
pub mod error;
pub mod exact;
pub mod materials;
pub mod output;
pub mod pws;
pub mod quadrature;
pub mod ratios;
pub mod specfun;
pub mod validation;

pub use error::{Error, Result};
