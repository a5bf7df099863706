//! Complex scalar fields on a lattice.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, Representation};
use crate::sum::pairwise_sum_by;

/// A complex field tied to one lattice and one representation.
/// Fields are immutable values; every operation returns a new field.
#[derive(Debug, Clone)]
pub struct ComplexField {
    lattice: Arc<Lattice>,
    repr: Representation,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(lattice: Arc<Lattice>, repr: Representation, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), lattice.len(), "value count must match lattice");
        ComplexField {
            lattice,
            repr,
            values,
        }
    }

    pub fn zeros(lattice: Arc<Lattice>, repr: Representation) -> Self {
        let n = lattice.len();
        ComplexField::new(lattice, repr, vec![Complex64::ZERO; n])
    }

    /// Build a position-space field from a function of the coordinate vector.
    pub fn from_position_fn<F: Fn([f64; 3]) -> Complex64>(lattice: Arc<Lattice>, f: F) -> Self {
        let values = (0..lattice.len()).map(|i| f(lattice.position(i))).collect();
        ComplexField::new(lattice, Representation::Position, values)
    }

    /// Build a momentum-space field from a function of the momentum vector.
    pub fn from_momentum_fn<F: Fn([f64; 3]) -> Complex64>(lattice: Arc<Lattice>, f: F) -> Self {
        let values = (0..lattice.len()).map(|i| f(lattice.momentum(i))).collect();
        ComplexField::new(lattice, Representation::Momentum, values)
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn repr(&self) -> Representation {
        self.repr
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn expect_repr(&self, expected: Representation) -> Result<()> {
        if self.repr != expected {
            return Err(Error::RepresentationMismatch {
                expected,
                found: self.repr,
            });
        }
        Ok(())
    }

    pub(crate) fn expect_same_lattice(&self, other: &ComplexField) -> Result<()> {
        if !Arc::ptr_eq(&self.lattice, &other.lattice) && self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        Ok(())
    }

    /// Pointwise map; keeps lattice and representation.
    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        ComplexField {
            lattice: Arc::clone(&self.lattice),
            repr: self.repr,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise map with the flat site index (for diagonal k-space operators).
    pub fn map_indexed<F: Fn(usize, Complex64) -> Complex64>(&self, f: F) -> Self {
        ComplexField {
            lattice: Arc::clone(&self.lattice),
            repr: self.repr,
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(i, &v)| f(i, v))
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &ComplexField) -> Result<Self> {
        self.expect_same_lattice(other)?;
        self.expect_repr(other.repr)?;
        Ok(ComplexField {
            lattice: Arc::clone(&self.lattice),
            repr: self.repr,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &ComplexField) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// L2 norm squared with the lattice measure (deterministic pairwise sum).
    pub fn norm_sq(&self) -> f64 {
        pairwise_sum_by(self.values.len(), |i| {
            self.lattice.weight(i, self.repr) * self.values[i].norm_sqr()
        })
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// L2 distance to another field on the same lattice/representation.
    pub fn distance(&self, other: &ComplexField) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// Max |value| over the lattice.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeMode;

    #[test]
    fn norm_of_uniform_line_field() {
        let lat = Lattice::new(LatticeMode::Line1d, 64, 8.0).unwrap();
        let f = ComplexField::from_position_fn(Arc::clone(&lat), |_| Complex64::new(1.0, 0.0));
        // integral of 1 over [-L/2, L/2) = L
        assert!((f.norm_sq() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn add_rejects_mismatched_representations() {
        let lat = Lattice::new(LatticeMode::Line1d, 64, 8.0).unwrap();
        let a = ComplexField::zeros(Arc::clone(&lat), Representation::Position);
        let b = ComplexField::zeros(Arc::clone(&lat), Representation::Momentum);
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn add_rejects_mismatched_lattices() {
        let la = Lattice::new(LatticeMode::Line1d, 64, 8.0).unwrap();
        let lb = Lattice::new(LatticeMode::Line1d, 128, 8.0).unwrap();
        let a = ComplexField::zeros(la, Representation::Position);
        let b = ComplexField::zeros(lb, Representation::Position);
        assert!(a.add(&b).is_err());
    }
}
