//! Positive-frequency Klein-Gordon states.
//!
//! A state is carried as the momentum amplitude `psi_hat(k)`; the position
//! wave function, its time derivative and gradient are reconstructed
//! spectrally:
//!
//! ```text
//! psi(r, t)      <- psi_hat/omega * e^(-i omega t)
//! dpsi/dt(r, t)  <- -i psi_hat   * e^(-i omega t)
//! grad psi(r, t) <- i k psi_hat/omega * e^(-i omega t)
//! ```
//!
//! Localization is measured through the energy density
//! `T = |grad psi|^2 + |dpsi/dt|^2 + m^2 |psi|^2`, normalized so its
//! integral is 1 (and exactly conserved, since evolution is a pure phase).

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::lattice::{Lattice, PhysicalParams, Representation};
use crate::profile::DensityProfile;
use crate::spectral::{gradient_apply, to_momentum, to_position, omega_apply, OmegaPower};

/// Relative residual above which a (psi, dpsi/dt) pair is rejected as
/// containing negative-frequency content.
pub const PAIR_REJECT_TOL: f64 = 1e-8;

#[derive(Clone)]
pub struct KGState {
    psi_hat: ComplexField,
    params: PhysicalParams,
    energy_normalized: bool,
    /// Consistency residual of the initial-data pair, when built from one.
    pair_residual: Option<f64>,
}

impl KGState {
    /// Build from initial data (psi(.,0), dpsi/dt(.,0)), both in position
    /// representation. The two routes to psi_hat must agree:
    /// `FT[i dpsi/dt]` versus `omega * FT[psi]`; a residual above
    /// [`PAIR_REJECT_TOL`] means the pair has negative-frequency content and
    /// is rejected.
    pub fn from_position_pair(
        psi0: &ComplexField,
        dpsi_dt0: &ComplexField,
        params: PhysicalParams,
    ) -> Result<Self> {
        psi0.expect_repr(Representation::Position)?;
        dpsi_dt0.expect_repr(Representation::Position)?;
        psi0.expect_same_lattice(dpsi_dt0)?;
        let from_dt = to_momentum(dpsi_dt0)?.scale(Complex64::new(0.0, 1.0));
        let from_psi = omega_apply(&to_momentum(psi0)?, OmegaPower::First, params)?;
        let scale = from_dt.norm().max(from_psi.norm());
        if scale == 0.0 {
            return Err(Error::ZeroState);
        }
        let residual = from_dt.distance(&from_psi)? / scale;
        if residual > PAIR_REJECT_TOL {
            return Err(Error::NegativeFrequencyPair {
                residual,
                threshold: PAIR_REJECT_TOL,
            });
        }
        Ok(KGState {
            psi_hat: from_dt,
            params,
            energy_normalized: false,
            pair_residual: Some(residual),
        })
    }

    /// Positive-frequency completion of a position amplitude: the unique
    /// dpsi/dt = -i sqrt(-laplacian + m^2) psi that puts the pair in the
    /// positive-frequency solution space. The resulting dpsi/dt is never
    /// compactly supported; that is the point of the construction.
    pub fn positive_frequency_completion(
        psi0: &ComplexField,
        params: PhysicalParams,
    ) -> Result<Self> {
        psi0.expect_repr(Representation::Position)?;
        let psi_hat = omega_apply(&to_momentum(psi0)?, OmegaPower::First, params)?;
        Ok(KGState {
            psi_hat,
            params,
            energy_normalized: false,
            pair_residual: Some(0.0),
        })
    }

    /// Wrap a momentum amplitude directly.
    pub fn from_momentum_amplitude(psi_hat: ComplexField, params: PhysicalParams) -> Result<Self> {
        psi_hat.expect_repr(Representation::Momentum)?;
        Ok(KGState {
            psi_hat,
            params,
            energy_normalized: false,
            pair_residual: None,
        })
    }

    pub fn psi_hat(&self) -> &ComplexField {
        &self.psi_hat
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        self.psi_hat.lattice()
    }

    pub fn params(&self) -> PhysicalParams {
        self.params
    }

    pub fn pair_residual(&self) -> Option<f64> {
        self.pair_residual
    }

    pub fn is_energy_normalized(&self) -> bool {
        self.energy_normalized
    }

    /// psi_hat with the evolution phase e^(-i omega t) applied.
    fn evolved_hat(&self, t: f64) -> ComplexField {
        let params = self.params;
        let lattice = Arc::clone(self.lattice());
        self.psi_hat.map_indexed(move |i, v| {
            v * Complex64::from_polar(1.0, -params.omega(lattice.momentum_radius(i)) * t)
        })
    }

    /// Position-representation wave function at time t.
    pub fn position_amplitude(&self, t: f64) -> Result<ComplexField> {
        to_position(&omega_apply(&self.evolved_hat(t), OmegaPower::Inverse, self.params)?)
    }

    /// Position-representation d psi / dt at time t.
    pub fn time_derivative(&self, t: f64) -> Result<ComplexField> {
        to_position(&self.evolved_hat(t).scale(Complex64::new(0.0, -1.0)))
    }
}

/// psi_hat(k) -> e^(-i omega(k) t) psi_hat(k).
pub fn evolve_kg(state: &KGState, t: f64) -> KGState {
    KGState {
        psi_hat: state.evolved_hat(t),
        params: state.params,
        energy_normalized: state.energy_normalized,
        pair_residual: state.pair_residual,
    }
}

fn pointwise_energy_density(state: &KGState, t: f64) -> Result<Vec<f64>> {
    let lattice = Arc::clone(state.lattice());
    let m = state.params.mass();
    let phi = omega_apply(&state.evolved_hat(t), OmegaPower::Inverse, state.params)?;
    let psi = to_position(&phi)?;
    let dpsi = state.time_derivative(t)?;
    let mut density: Vec<f64> = (0..lattice.len())
        .map(|i| dpsi.values()[i].norm_sqr() + m * m * psi.values()[i].norm_sqr())
        .collect();
    for g in gradient_apply(&phi)? {
        // radial gradients arrive in position representation already
        let gpos = match g.repr() {
            Representation::Position => g,
            Representation::Momentum => to_position(&g)?,
        };
        for (d, v) in density.iter_mut().zip(gpos.values()) {
            *d += v.norm_sqr();
        }
    }
    Ok(density)
}

/// Energy density T(r, t), pointwise nonnegative, shell-integrated.
pub fn energy_density(state: &KGState, t: f64) -> Result<DensityProfile> {
    let lattice = Arc::clone(state.lattice());
    let density = pointwise_energy_density(state, t)?;
    Ok(DensityProfile::from_pointwise(&lattice, t, &density))
}

/// Pointwise energy density, exposed for uniformity checks.
pub fn energy_density_pointwise(state: &KGState, t: f64) -> Result<Vec<f64>> {
    pointwise_energy_density(state, t)
}

/// Signed charge density rho_c = (i/2)(psi* dpsi/dt - psi dpsi*/dt).
pub fn charge_density(state: &KGState, t: f64) -> Result<DensityProfile> {
    let lattice = Arc::clone(state.lattice());
    let psi = state.position_amplitude(t)?;
    let dpsi = state.time_derivative(t)?;
    let density: Vec<f64> = (0..lattice.len())
        .map(|i| -(psi.values()[i].conj() * dpsi.values()[i]).im)
        .collect();
    Ok(DensityProfile::from_pointwise(&lattice, t, &density))
}

/// Pointwise signed charge density.
pub fn charge_density_pointwise(state: &KGState, t: f64) -> Result<Vec<f64>> {
    let psi = state.position_amplitude(t)?;
    let dpsi = state.time_derivative(t)?;
    Ok((0..state.lattice().len())
        .map(|i| -(psi.values()[i].conj() * dpsi.values()[i]).im)
        .collect())
}

/// Rescale so the energy integral at t = 0 is exactly 1.
pub fn normalize_energy(state: &KGState) -> Result<KGState> {
    let total = energy_density(state, 0.0)?.total();
    if total <= 0.0 {
        return Err(Error::ZeroState);
    }
    Ok(KGState {
        psi_hat: state.psi_hat.scale(Complex64::new(1.0 / total.sqrt(), 0.0)),
        params: state.params,
        energy_normalized: true,
        pair_residual: state.pair_residual,
    })
}

/// Probability that the particle's energy is inside the ball of radius
/// `radius` at time `t`. Requires an energy-normalized state.
pub fn n_ball_kg(state: &KGState, radius: f64, t: f64) -> Result<f64> {
    if !state.energy_normalized {
        return Err(Error::NotNormalized(f64::NAN));
    }
    energy_density(state, t)?.ball_integral(radius)
}

impl KGState {
    #[cfg(test)]
    fn clone_scaled(&self, s: f64) -> KGState {
        KGState {
            psi_hat: self.psi_hat.scale(Complex64::new(s, 0.0)),
            params: self.params,
            energy_normalized: false,
            pair_residual: self.pair_residual,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeMode;
    use crate::seeds;
    use approx::assert_abs_diff_eq;

    fn radial(n: usize, l: f64) -> Arc<Lattice> {
        Lattice::new(LatticeMode::Radial3d, n, l).unwrap()
    }

    fn bump_state(lat: &Arc<Lattice>, params: PhysicalParams, radius: f64) -> KGState {
        let psi0 = ComplexField::from_position_fn(Arc::clone(lat), |[r, _, _]| {
            Complex64::new(seeds::bump(r, radius), 0.0)
        });
        KGState::positive_frequency_completion(&psi0, params).unwrap()
    }

    #[test]
    fn valid_pair_is_accepted_with_tiny_residual() {
        let lat = radial(512, 32.0);
        let params = PhysicalParams::new(1.0).unwrap();
        let psi0 = ComplexField::from_position_fn(Arc::clone(&lat), |[r, _, _]| {
            Complex64::new(seeds::bump(r, 1.5), 0.0)
        });
        // build the matching dpsi/dt = -i omega psi via the spectral route
        let dpsi = to_position(
            &omega_apply(&to_momentum(&psi0).unwrap(), OmegaPower::First, params)
                .unwrap()
                .scale(Complex64::new(0.0, -1.0)),
        )
        .unwrap();
        let state = KGState::from_position_pair(&psi0, &dpsi, params).unwrap();
        assert!(state.pair_residual().unwrap() < 1e-10);
    }

    #[test]
    fn negative_frequency_pair_is_rejected() {
        let lat = radial(512, 32.0);
        let params = PhysicalParams::new(1.0).unwrap();
        let psi0 = ComplexField::from_position_fn(Arc::clone(&lat), |[r, _, _]| {
            Complex64::new(seeds::bump(r, 1.5), 0.0)
        });
        let dpsi = to_position(
            &omega_apply(&to_momentum(&psi0).unwrap(), OmegaPower::First, params)
                .unwrap()
                .scale(Complex64::new(0.0, 1.0)), // wrong sign
        )
        .unwrap();
        match KGState::from_position_pair(&psi0, &dpsi, params) {
            Err(Error::NegativeFrequencyPair { .. }) => {}
            other => panic!("expected rejection, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn plane_wave_pair_lands_on_single_mode() {
        let lat = Lattice::new(LatticeMode::Line1d, 128, 16.0).unwrap();
        let params = PhysicalParams::new(1.0).unwrap();
        let k0 = 3.0 * lat.dk();
        let omega0 = params.omega(k0);
        let psi0 = ComplexField::from_position_fn(Arc::clone(&lat), |[x, _, _]| {
            Complex64::from_polar(1.0, k0 * x)
        });
        let dpsi = psi0.scale(Complex64::new(0.0, -omega0));
        let state = KGState::from_position_pair(&psi0, &dpsi, params).unwrap();
        // all weight on the k0 mode
        let hat = state.psi_hat();
        let total = hat.norm_sq();
        let at_mode = hat.values()[3].norm_sqr() * lat.dk();
        assert!((at_mode - total).abs() < 1e-10 * total);
    }

    #[test]
    fn evolution_group_law_and_period() {
        let lat = radial(256, 32.0);
        let params = PhysicalParams::new(1.0).unwrap();
        let state = bump_state(&lat, params, 1.0);
        let a = evolve_kg(&evolve_kg(&state, 0.7), 1.6);
        let b = evolve_kg(&state, 2.3);
        assert!(a.psi_hat().distance(b.psi_hat()).unwrap() < 1e-12 * (1.0 + b.psi_hat().norm()));
        // t = 0 is the identity
        let c = evolve_kg(&state, 0.0);
        assert!(c.psi_hat().distance(state.psi_hat()).unwrap() == 0.0);
    }

    #[test]
    fn energy_is_normalized_and_conserved() {
        let lat = radial(1024, 32.0);
        let params = PhysicalParams::new(1.0).unwrap();
        let state = normalize_energy(&bump_state(&lat, params, 1.0)).unwrap();
        for t in [0.0, 1.0, 5.0, 10.0] {
            let total = energy_density(&state, t).unwrap().total();
            assert!((total - 1.0).abs() < 1e-9, "t={t}: |E-1| = {:.3e}", (total - 1.0).abs());
        }
    }

    #[test]
    fn energy_density_is_pointwise_nonnegative() {
        let lat = radial(256, 32.0);
        let params = PhysicalParams::new(1.0).unwrap();
        let state = bump_state(&lat, params, 2.0);
        for t in [0.0, 2.5] {
            let d = energy_density_pointwise(&state, t).unwrap();
            assert!(d.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn plane_wave_energy_density_is_uniform() {
        let lat = Lattice::new(LatticeMode::Line1d, 128, 16.0).unwrap();
        let params = PhysicalParams::new(1.0).unwrap();
        let hat = ComplexField::new(
            Arc::clone(&lat),
            Representation::Momentum,
            (0..lat.len())
                .map(|i| {
                    if i == 5 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::ZERO
                    }
                })
                .collect(),
        );
        let state = KGState::from_momentum_amplitude(hat, params).unwrap();
        let d = energy_density_pointwise(&state, 0.3).unwrap();
        let mean = d.iter().sum::<f64>() / d.len() as f64;
        for v in &d {
            assert_abs_diff_eq!(*v, mean, epsilon = 1e-12 * mean);
        }
    }

    #[test]
    fn single_mode_charge_density_is_uniform_positive() {
        let lat = Lattice::new(LatticeMode::Line1d, 128, 16.0).unwrap();
        let params = PhysicalParams::new(1.0).unwrap();
        let hat = ComplexField::new(
            Arc::clone(&lat),
            Representation::Momentum,
            (0..lat.len())
                .map(|i| {
                    if i == 4 {
                        Complex64::new(0.7, 0.1)
                    } else {
                        Complex64::ZERO
                    }
                })
                .collect(),
        );
        let state = KGState::from_momentum_amplitude(hat, params).unwrap();
        let d = charge_density_pointwise(&state, 0.0).unwrap();
        let mean = d.iter().sum::<f64>() / d.len() as f64;
        assert!(mean > 0.0);
        for v in &d {
            assert_abs_diff_eq!(*v, mean, epsilon = 1e-12 * mean);
        }
    }

    #[test]
    fn charge_is_conserved_in_time() {
        let lat = radial(512, 32.0);
        let params = PhysicalParams::new(1.0).unwrap();
        let state = normalize_energy(&bump_state(&lat, params, 1.0)).unwrap();
        let q0 = charge_density(&state, 0.0).unwrap().total();
        let q7 = charge_density(&state, 7.0).unwrap().total();
        assert!((q0 - q7).abs() < 1e-10 * q0.abs().max(1.0));
    }

    #[test]
    fn normalize_is_projective_and_idempotent() {
        let lat = radial(256, 32.0);
        let params = PhysicalParams::new(1.0).unwrap();
        let state = bump_state(&lat, params, 1.0);
        let n1 = normalize_energy(&state).unwrap();
        let n2 = normalize_energy(&state.clone_scaled(3.0)).unwrap();
        assert!(n1.psi_hat().distance(n2.psi_hat()).unwrap() < 1e-12 * n1.psi_hat().norm());
        let n3 = normalize_energy(&n1).unwrap();
        assert!(n1.psi_hat().distance(n3.psi_hat()).unwrap() < 1e-12 * n1.psi_hat().norm());
    }

    #[test]
    fn n_ball_needs_normalization_and_is_monotone() {
        let lat = radial(1024, 32.0);
        let params = PhysicalParams::new(1.0).unwrap();
        let raw = bump_state(&lat, params, 1.0);
        assert!(n_ball_kg(&raw, 3.0, 0.0).is_err());
        let state = normalize_energy(&raw).unwrap();
        assert_eq!(n_ball_kg(&state, 0.0, 0.0).unwrap(), 0.0);
        let mut last = 0.0;
        for i in 1..=15 {
            let v = n_ball_kg(&state, i as f64, 0.0).unwrap();
            assert!(v >= last);
            last = v;
        }
        assert!(n_ball_kg(&state, lat.half_box(), 0.0).unwrap() >= 1.0 - 1e-6);
    }
}
