//! Shell-integrated density profiles.
//!
//! A profile holds the density of some observable binned over spherical
//! shells of width `dr`: `value[b]` is the shell-integrated density per unit
//! radius, so `sum_b value[b] * dr` is the total. `count[b]` is the number of
//! lattice sites that contributed to bin `b` (used to weight tail fits on
//! Cartesian lattices, where outer shells are sampled unevenly).

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeMode};
use crate::sum::{pairwise_sum, pairwise_sum_by};

#[derive(Debug, Clone)]
pub struct DensityProfile {
    time: f64,
    dr: f64,
    /// Largest radius free of wrap-around (half the box).
    half_box: f64,
    r: Vec<f64>,
    value: Vec<f64>,
    count: Vec<usize>,
}

impl DensityProfile {
    /// Bin a pointwise density given on a lattice into shells of width `dx`.
    ///
    /// For `Radial3d` the bins coincide with the radial grid and the shell
    /// density is `4 pi r^2 * density`. For `Line1d` the "shell" at radius r
    /// is the pair of sites at +-r. Signed densities are allowed.
    pub fn from_pointwise(lattice: &Lattice, time: f64, density: &[f64]) -> Self {
        assert_eq!(density.len(), lattice.len());
        let dr = lattice.dx();
        match lattice.mode() {
            LatticeMode::Radial3d => {
                let n = lattice.points();
                let r: Vec<f64> = (0..n).map(|j| lattice.radius(j)).collect();
                let value: Vec<f64> = (0..n)
                    .map(|j| 4.0 * std::f64::consts::PI * r[j] * r[j] * density[j])
                    .collect();
                DensityProfile {
                    time,
                    dr,
                    half_box: lattice.half_box(),
                    r,
                    value,
                    count: vec![1; n],
                }
            }
            LatticeMode::Line1d | LatticeMode::Cartesian3d => {
                let max_r = match lattice.mode() {
                    LatticeMode::Line1d => lattice.half_box(),
                    _ => lattice.half_box() * 3.0_f64.sqrt(),
                };
                let nbins = (max_r / dr).ceil() as usize + 1;
                let mut mass = vec![0.0; nbins];
                let mut count = vec![0usize; nbins];
                let site_vol = lattice.weight(0, crate::lattice::Representation::Position);
                for i in 0..lattice.len() {
                    let b = (lattice.radius(i) / dr) as usize;
                    let b = b.min(nbins - 1);
                    mass[b] += density[i] * site_vol;
                    count[b] += 1;
                }
                let r: Vec<f64> = (0..nbins).map(|b| (b as f64 + 0.5) * dr).collect();
                let value: Vec<f64> = mass.iter().map(|m| m / dr).collect();
                DensityProfile {
                    time,
                    dr,
                    half_box: lattice.half_box(),
                    r,
                    value,
                    count,
                }
            }
        }
    }

    /// Synthetic profile for tests and regression oracles.
    pub fn synthetic(time: f64, dr: f64, half_box: f64, r: Vec<f64>, value: Vec<f64>) -> Self {
        assert_eq!(r.len(), value.len());
        let count = vec![1; r.len()];
        DensityProfile {
            time,
            dr,
            half_box,
            r,
            value,
            count,
        }
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn half_box(&self) -> f64 {
        self.half_box
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.value
    }

    pub fn counts(&self) -> &[usize] {
        &self.count
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Integral of the profile over all radii.
    pub fn total(&self) -> f64 {
        pairwise_sum_by(self.value.len(), |b| self.value[b] * self.dr)
    }

    /// Integral over the ball of radius `radius`, with a linear fraction of
    /// the straddling bin. Nondecreasing in `radius` for nonnegative data.
    pub fn ball_integral(&self, radius: f64) -> Result<f64> {
        if radius > self.half_box {
            return Err(Error::RadiusBeyondBox {
                radius,
                limit: self.half_box,
            });
        }
        if radius <= 0.0 {
            return Ok(0.0);
        }
        let full = ((radius / self.dr).floor() as usize).min(self.value.len());
        let masses: Vec<f64> = self.value[..full].iter().map(|v| v * self.dr).collect();
        let mut acc = pairwise_sum(&masses);
        if full < self.value.len() {
            let frac = (radius - full as f64 * self.dr) / self.dr;
            acc += self.value[full] * self.dr * frac;
        }
        Ok(acc)
    }

    /// Mass beyond `radius`, summed over the outer bins directly so that a
    /// density which vanishes there comes back as an exact zero.
    pub fn exterior(&self, radius: f64) -> Result<f64> {
        if radius > self.half_box {
            return Err(Error::RadiusBeyondBox {
                radius,
                limit: self.half_box,
            });
        }
        if radius <= 0.0 {
            return Ok(self.total());
        }
        let full = ((radius / self.dr).floor() as usize).min(self.value.len());
        let mut acc = if full < self.value.len() {
            let masses: Vec<f64> =
                self.value[full + 1..].iter().map(|v| v * self.dr).collect();
            pairwise_sum(&masses)
        } else {
            0.0
        };
        if full < self.value.len() {
            let frac = (radius - full as f64 * self.dr) / self.dr;
            acc += self.value[full] * self.dr * (1.0 - frac);
        }
        Ok(acc)
    }

    pub fn min_value(&self) -> f64 {
        self.value.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_value(&self) -> f64 {
        self.value.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Lattice, LatticeMode};

    #[test]
    fn radial_profile_total_matches_norm() {
        let lat = Lattice::new(LatticeMode::Radial3d, 256, 30.0).unwrap();
        // density e^(-2r): integral 4 pi / 8 = pi
        let density: Vec<f64> = (0..lat.len()).map(|j| (-2.0 * lat.radius(j)).exp()).collect();
        let p = DensityProfile::from_pointwise(&lat, 0.0, &density);
        assert!((p.total() - std::f64::consts::PI).abs() < 1e-4);
    }

    #[test]
    fn ball_integral_is_monotone_and_bounded() {
        let lat = Lattice::new(LatticeMode::Radial3d, 128, 20.0).unwrap();
        let density: Vec<f64> = (0..lat.len()).map(|j| (-lat.radius(j)).exp()).collect();
        let p = DensityProfile::from_pointwise(&lat, 0.0, &density);
        let mut last = 0.0;
        for i in 1..40 {
            let r = i as f64 * 0.25;
            let v = p.ball_integral(r).unwrap();
            assert!(v >= last);
            last = v;
        }
        assert_eq!(p.ball_integral(0.0).unwrap(), 0.0);
        assert!(p.ball_integral(30.0).is_err());
    }

    #[test]
    fn cartesian_binning_conserves_mass() {
        let lat = Lattice::new(LatticeMode::Cartesian3d, 32, 16.0).unwrap();
        let density: Vec<f64> = (0..lat.len())
            .map(|i| {
                let r = lat.radius(i);
                (-r * r).exp()
            })
            .collect();
        let p = DensityProfile::from_pointwise(&lat, 0.0, &density);
        let direct: f64 = density.iter().map(|d| d * lat.dx().powi(3)).sum();
        assert!((p.total() - direct).abs() < 1e-10 * direct);
    }
}
