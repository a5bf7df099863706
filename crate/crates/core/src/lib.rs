//! Spectral toolkit for positive-energy relativistic wave packets.
//!
//! Builds free-particle Dirac and Klein-Gordon states restricted to the
//! positive-energy/positive-frequency sector, evaluates their localization
//! observables (probability density, energy density, ball probabilities
//! N(B_r)) and measures the exponential decay rate of their tails, which the
//! square-root dispersion pins near the Compton rate m.

pub mod analysis;
pub mod dirac;
pub mod error;
pub mod field;
pub mod kleingordon;
pub mod lattice;
pub mod profile;
pub mod seeds;
pub mod spectral;
pub mod sum;

pub use num_complex;

pub use error::{Error, Result};
pub use field::ComplexField;
pub use lattice::{Lattice, LatticeMode, PhysicalParams, Representation};
pub use profile::DensityProfile;
