//! Discretized position/momentum domains.
//!
//! All three modes share the convention `dx = L / points`, `dk = 2*pi / L`,
//! so `dx * dk * points = 2*pi` exactly per axis.
//!
//! * `Line1d`: positions `x_j = (j - N/2) dx`, momenta on the usual signed
//!   FFT grid `k_n = dk * s(n)`.
//! * `Radial3d`: spherically symmetric scalars sampled at `r_j = (j + 1/2) dx`
//!   (half-sample offset keeps `r = 0` off the grid). The conjugate radial
//!   momentum grid is `k_n = (n + 1/2) * pi/L`, the DST-IV companion grid.
//! * `Cartesian3d`: `points^3` sites, `x = (j - N/2) dx` per axis.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeMode {
    Line1d,
    Radial3d,
    Cartesian3d,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Position,
    Momentum,
}

#[derive(Debug, PartialEq)]
pub struct Lattice {
    mode: LatticeMode,
    points: usize,
    box_length: f64,
    dx: f64,
    dk: f64,
}

impl Lattice {
    pub fn new(mode: LatticeMode, points: usize, box_length: f64) -> Result<Arc<Self>> {
        if points < 32 || !points.is_power_of_two() {
            return Err(Error::BadPointCount(points));
        }
        if !(box_length > 0.0) || !box_length.is_finite() {
            return Err(Error::BadBoxLength(box_length));
        }
        let dx = box_length / points as f64;
        let dk = 2.0 * PI / box_length;
        Ok(Arc::new(Lattice {
            mode,
            points,
            box_length,
            dx,
            dk,
        }))
    }

    pub fn mode(&self) -> LatticeMode {
        self.mode
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dk(&self) -> f64 {
        self.dk
    }

    /// Radial momentum spacing for `Radial3d` (the DST-IV conjugate grid).
    pub fn radial_dk(&self) -> f64 {
        PI / self.box_length
    }

    /// Total number of lattice sites (values per field).
    pub fn len(&self) -> usize {
        match self.mode {
            LatticeMode::Line1d | LatticeMode::Radial3d => self.points,
            LatticeMode::Cartesian3d => self.points * self.points * self.points,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Signed FFT frequency index for axis index `n`.
    fn signed(&self, n: usize) -> i64 {
        let n = n as i64;
        let half = self.points as i64 / 2;
        if n < half {
            n
        } else {
            n - self.points as i64
        }
    }

    fn cart_split(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.points;
        (idx / (n * n), (idx / n) % n, idx % n)
    }

    /// Position coordinate vector of flat site `idx`.
    pub fn position(&self, idx: usize) -> [f64; 3] {
        match self.mode {
            LatticeMode::Line1d => {
                let x = (idx as f64 - self.points as f64 / 2.0) * self.dx;
                [x, 0.0, 0.0]
            }
            LatticeMode::Radial3d => [(idx as f64 + 0.5) * self.dx, 0.0, 0.0],
            LatticeMode::Cartesian3d => {
                let (i, j, k) = self.cart_split(idx);
                let c = |a: usize| (a as f64 - self.points as f64 / 2.0) * self.dx;
                [c(i), c(j), c(k)]
            }
        }
    }

    /// Distance of flat site `idx` from the origin in position space.
    pub fn radius(&self, idx: usize) -> f64 {
        let [x, y, z] = self.position(idx);
        match self.mode {
            LatticeMode::Line1d => x.abs(),
            LatticeMode::Radial3d => x,
            LatticeMode::Cartesian3d => (x * x + y * y + z * z).sqrt(),
        }
    }

    /// Momentum vector of flat site `idx` (momentum representation).
    pub fn momentum(&self, idx: usize) -> [f64; 3] {
        match self.mode {
            LatticeMode::Line1d => [self.signed(idx) as f64 * self.dk, 0.0, 0.0],
            LatticeMode::Radial3d => [(idx as f64 + 0.5) * self.radial_dk(), 0.0, 0.0],
            LatticeMode::Cartesian3d => {
                let (i, j, k) = self.cart_split(idx);
                [
                    self.signed(i) as f64 * self.dk,
                    self.signed(j) as f64 * self.dk,
                    self.signed(k) as f64 * self.dk,
                ]
            }
        }
    }

    /// |k| at flat site `idx`.
    pub fn momentum_radius(&self, idx: usize) -> f64 {
        let [kx, ky, kz] = self.momentum(idx);
        match self.mode {
            LatticeMode::Line1d => kx.abs(),
            LatticeMode::Radial3d => kx,
            LatticeMode::Cartesian3d => (kx * kx + ky * ky + kz * kz).sqrt(),
        }
    }

    /// Integration weight of site `idx` in the given representation
    /// (so that `sum_i w_i |f_i|^2` is the L2 norm squared).
    pub fn weight(&self, idx: usize, repr: Representation) -> f64 {
        match (self.mode, repr) {
            (LatticeMode::Line1d, Representation::Position) => self.dx,
            (LatticeMode::Line1d, Representation::Momentum) => self.dk,
            (LatticeMode::Cartesian3d, Representation::Position) => self.dx.powi(3),
            (LatticeMode::Cartesian3d, Representation::Momentum) => self.dk.powi(3),
            (LatticeMode::Radial3d, Representation::Position) => {
                let r = self.radius(idx);
                4.0 * PI * r * r * self.dx
            }
            (LatticeMode::Radial3d, Representation::Momentum) => {
                let k = self.momentum_radius(idx);
                4.0 * PI * k * k * self.radial_dk()
            }
        }
    }

    /// Largest radius free of wrap-around in position space.
    pub fn half_box(&self) -> f64 {
        self.box_length / 2.0
    }
}

/// Mass and the derived Compton wavelength, in units where hbar = c = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    mass: f64,
}

impl PhysicalParams {
    pub fn new(mass: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::BadMass(mass));
        }
        Ok(PhysicalParams { mass })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Compton wavelength 1/m; `compton() * mass() == 1` exactly.
    pub fn compton(&self) -> f64 {
        1.0 / self.mass
    }

    pub fn omega(&self, k: f64) -> f64 {
        (k * k + self.mass * self.mass).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_relation_is_exact() {
        for (mode, n, l) in [
            (LatticeMode::Line1d, 64, 2.0 * PI),
            (LatticeMode::Radial3d, 256, 40.0),
            (LatticeMode::Cartesian3d, 32, 20.0),
        ] {
            let lat = Lattice::new(mode, n, l).unwrap();
            assert!((lat.dx() * lat.dk() * n as f64 - 2.0 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn line1d_example_spacings() {
        let lat = Lattice::new(LatticeMode::Line1d, 64, 2.0 * PI).unwrap();
        assert!((lat.dx() - 2.0 * PI / 64.0).abs() < 1e-15);
        assert!((lat.dk() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn radial_grid_is_half_offset() {
        let lat = Lattice::new(LatticeMode::Radial3d, 256, 40.0).unwrap();
        for j in [0usize, 1, 255] {
            assert!((lat.radius(j) - lat.dx() * (j as f64 + 0.5)).abs() < 1e-14);
        }
        // covers (0, L/2] and beyond; r = 0 is off-grid
        assert!(lat.radius(0) > 0.0);
        assert!(lat.radius(255) > lat.half_box());
    }

    #[test]
    fn cartesian_counts_and_momenta() {
        let lat = Lattice::new(LatticeMode::Cartesian3d, 32, 20.0).unwrap();
        assert_eq!(lat.len(), 32 * 32 * 32);
        assert!((lat.dk() - 2.0 * PI / 20.0).abs() < 1e-15);
        // corner site has all-negative momenta of magnitude dk*16
        let [kx, ky, kz] = lat.momentum(lat.len() / 2 + 16 * 32 + 16);
        assert!(kx.abs() <= 16.0 * lat.dk() + 1e-12);
        assert!(ky.abs() <= 16.0 * lat.dk() + 1e-12);
        assert!(kz.abs() <= 16.0 * lat.dk() + 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Lattice::new(LatticeMode::Line1d, 48, 1.0).is_err());
        assert!(Lattice::new(LatticeMode::Line1d, 16, 1.0).is_err());
        assert!(Lattice::new(LatticeMode::Line1d, 64, 0.0).is_err());
        assert!(Lattice::new(LatticeMode::Line1d, 64, -3.0).is_err());
    }

    #[test]
    fn compton_relation_exact() {
        let p = PhysicalParams::new(2.5).unwrap();
        assert_eq!(p.compton() * p.mass(), 1.0);
        assert!(PhysicalParams::new(0.0).is_err());
    }
}
