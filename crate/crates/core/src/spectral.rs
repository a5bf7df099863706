//! Unitary Fourier transforms and diagonal momentum-space operators.
//!
//! Conventions: symmetric `(2*pi)^(-d/2)` normalization in both directions.
//! For `Radial3d` the transform is the spherically symmetric 3D pair
//!
//! ```text
//! psi(k) = sqrt(2/pi) (1/k) \int_0^inf r sin(kr) psi(r) dr
//! psi(r) = sqrt(2/pi) (1/r) \int_0^inf k sin(kr) psi(k) dk
//! ```
//!
//! realized as a DST-IV on `u = r*psi` over the half-offset grids, which is
//! exactly unitary in the lattice measure.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustdct::DctPlanner;
use rustfft::FftPlanner;

use crate::error::Result;
use crate::field::ComplexField;
use crate::lattice::{Lattice, LatticeMode, PhysicalParams, Representation};

const SQRT_2PI: f64 = 2.5066282746310002;

/// Position -> momentum, unitary.
pub fn to_momentum(field: &ComplexField) -> Result<ComplexField> {
    field.expect_repr(Representation::Position)?;
    transform(field, Direction::Forward)
}

/// Momentum -> position, unitary.
pub fn to_position(field: &ComplexField) -> Result<ComplexField> {
    field.expect_repr(Representation::Momentum)?;
    transform(field, Direction::Backward)
}

#[derive(Clone, Copy, PartialEq)]
enum Direction {
    Forward,
    Backward,
}

fn transform(field: &ComplexField, dir: Direction) -> Result<ComplexField> {
    let lattice = Arc::clone(field.lattice());
    let out_repr = match dir {
        Direction::Forward => Representation::Momentum,
        Direction::Backward => Representation::Position,
    };
    let values = match lattice.mode() {
        LatticeMode::Line1d => fft_axes(&lattice, field.values().to_vec(), dir, 1),
        LatticeMode::Cartesian3d => fft_axes(&lattice, field.values().to_vec(), dir, 3),
        LatticeMode::Radial3d => radial_transform(&lattice, field.values(), dir),
    };
    Ok(ComplexField::new(lattice, out_repr, values))
}

/// Centered-grid FFT along `axes` trailing/leading axes of a flat row-major
/// cube (or a 1D line). Per axis: multiply by (-1)^n, scale by dx/sqrt(2*pi)
/// forward or dk/sqrt(2*pi) backward.
fn fft_axes(
    lattice: &Lattice,
    mut data: Vec<Complex64>,
    dir: Direction,
    naxes: usize,
) -> Vec<Complex64> {
    let n = lattice.points();
    let mut planner = FftPlanner::<f64>::new();
    let fft = match dir {
        Direction::Forward => planner.plan_fft_forward(n),
        Direction::Backward => planner.plan_fft_inverse(n),
    };
    let factor = match dir {
        Direction::Forward => lattice.dx() / SQRT_2PI,
        Direction::Backward => lattice.dk() / SQRT_2PI,
    };
    let mut scratch = vec![Complex64::ZERO; fft.get_inplace_scratch_len()];
    let mut line = vec![Complex64::ZERO; n];

    for axis in 0..naxes {
        // stride pattern for this axis in the flat layout
        let (stride, nlines) = match naxes {
            1 => (1usize, 1usize),
            3 => match axis {
                0 => (n * n, n * n),
                1 => (n, n * n),
                _ => (1, n * n),
            },
            _ => unreachable!(),
        };
        for lineno in 0..nlines {
            let base = match (naxes, axis) {
                (1, _) => 0,
                (3, 0) => lineno,
                (3, 1) => (lineno / n) * n * n + lineno % n,
                (3, _) => lineno * n,
                _ => unreachable!(),
            };
            // gather, alternate-sign pre-phase on backward direction
            for j in 0..n {
                let v = data[base + j * stride];
                line[j] = if dir == Direction::Backward && j % 2 == 1 {
                    -v
                } else {
                    v
                };
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            // alternate-sign post-phase on forward direction, then scale
            for j in 0..n {
                let mut v = line[j] * factor;
                if dir == Direction::Forward && j % 2 == 1 {
                    v = -v;
                }
                data[base + j * stride] = v;
            }
        }
    }
    data
}

fn radial_transform(lattice: &Lattice, values: &[Complex64], dir: Direction) -> Vec<Complex64> {
    let n = lattice.points();
    let mut planner = DctPlanner::<f64>::new();
    let dst = planner.plan_dst4(n);

    // input abscissa/weight and output abscissa depend on direction
    let (d_in, in_coord, out_coord): (f64, fn(&Lattice, usize) -> f64, fn(&Lattice, usize) -> f64) =
        match dir {
            Direction::Forward => (lattice.dx(), Lattice::radius, Lattice::momentum_radius),
            Direction::Backward => (lattice.radial_dk(), Lattice::momentum_radius, Lattice::radius),
        };
    let scale = (2.0 / PI).sqrt() * d_in;

    let mut re: Vec<f64> = (0..n).map(|j| in_coord(lattice, j) * values[j].re).collect();
    let mut im: Vec<f64> = (0..n).map(|j| in_coord(lattice, j) * values[j].im).collect();
    dst.process_dst4(&mut re);
    dst.process_dst4(&mut im);
    (0..n)
        .map(|j| Complex64::new(re[j], im[j]) * (scale / out_coord(lattice, j)))
        .collect()
}

/// Power of the dispersion factor omega(k) = +sqrt(k^2 + m^2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaPower {
    Inverse,
    Sqrt,
    First,
    Square,
}

impl OmegaPower {
    fn apply(self, omega: f64) -> f64 {
        match self {
            OmegaPower::Inverse => 1.0 / omega,
            OmegaPower::Sqrt => omega.sqrt(),
            OmegaPower::First => omega,
            OmegaPower::Square => omega * omega,
        }
    }
}

/// Pointwise multiplication by omega(k)^p, positive branch always.
pub fn omega_apply(
    field: &ComplexField,
    power: OmegaPower,
    params: PhysicalParams,
) -> Result<ComplexField> {
    field.expect_repr(Representation::Momentum)?;
    let lattice = Arc::clone(field.lattice());
    Ok(field.map_indexed(move |i, v| {
        v * power.apply(params.omega(lattice.momentum_radius(i)))
    }))
}

/// Spectral gradient.
///
/// * `Line1d`: one momentum-space field multiplied by `i k`.
/// * `Cartesian3d`: three momentum-space fields multiplied by `i k_j`.
/// * `Radial3d`: one *position-space* field holding the radial derivative
///   `d psi/dr (r_j)`, which for spherically symmetric `psi` is all that
///   `|grad psi|^2` needs.
pub fn gradient_apply(field: &ComplexField) -> Result<Vec<ComplexField>> {
    field.expect_repr(Representation::Momentum)?;
    let lattice = Arc::clone(field.lattice());
    match lattice.mode() {
        LatticeMode::Line1d => Ok(vec![field.map_indexed(|i, v| {
            Complex64::new(0.0, lattice.momentum(i)[0]) * v
        })]),
        LatticeMode::Cartesian3d => {
            let mut out = Vec::with_capacity(3);
            for axis in 0..3 {
                let lat = Arc::clone(&lattice);
                out.push(field.map_indexed(move |i, v| {
                    Complex64::new(0.0, lat.momentum(i)[axis]) * v
                }));
            }
            Ok(out)
        }
        LatticeMode::Radial3d => Ok(vec![radial_derivative(&lattice, field)]),
    }
}

/// d/dr of a spherically symmetric field given in momentum representation,
/// returned in position representation: psi' = u'/r - u/r^2 with u = r*psi,
/// u' evaluated by the DCT-IV companion of the radial sine transform.
fn radial_derivative(lattice: &Arc<Lattice>, field: &ComplexField) -> ComplexField {
    let n = lattice.points();
    let mut planner = DctPlanner::<f64>::new();
    let dct = planner.plan_dct4(n);
    let dk = lattice.radial_dk();
    let scale = (2.0 / PI).sqrt() * dk;

    // v_n = k_n * psi_tilde_n; u'(r_j) = sqrt(2/pi) dk sum_n k_n cos(k_n r_j) v_n
    let mut re: Vec<f64> = (0..n)
        .map(|j| {
            let k = lattice.momentum_radius(j);
            k * k * field.values()[j].re
        })
        .collect();
    let mut im: Vec<f64> = (0..n)
        .map(|j| {
            let k = lattice.momentum_radius(j);
            k * k * field.values()[j].im
        })
        .collect();
    dct.process_dct4(&mut re);
    dct.process_dct4(&mut im);

    let psi = to_position(field).expect("repr checked by caller");
    let values: Vec<Complex64> = (0..n)
        .map(|j| {
            let r = lattice.radius(j);
            let uprime = Complex64::new(re[j], im[j]) * scale;
            (uprime - psi.values()[j]) / r
        })
        .collect();
    ComplexField::new(Arc::clone(lattice), Representation::Position, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn line(n: usize, l: f64) -> Arc<Lattice> {
        Lattice::new(LatticeMode::Line1d, n, l).unwrap()
    }

    #[test]
    fn round_trip_is_identity_line1d() {
        let lat = line(128, 20.0);
        let f = ComplexField::from_position_fn(Arc::clone(&lat), |[x, _, _]| {
            Complex64::new((x * 0.7).sin() * (-x * x / 3.0).exp(), (x * 1.3).cos())
        });
        let back = to_position(&to_momentum(&f).unwrap()).unwrap();
        assert!(f.distance(&back).unwrap() < 1e-12);
    }

    #[test]
    fn round_trip_is_identity_radial3d() {
        let lat = Lattice::new(LatticeMode::Radial3d, 256, 30.0).unwrap();
        let f = ComplexField::from_position_fn(Arc::clone(&lat), |[r, _, _]| {
            Complex64::new((-r).exp(), r * (-r * r / 2.0).exp())
        });
        let back = to_position(&to_momentum(&f).unwrap()).unwrap();
        assert!(f.distance(&back).unwrap() < 1e-12);
    }

    #[test]
    fn round_trip_is_identity_cartesian3d() {
        let lat = Lattice::new(LatticeMode::Cartesian3d, 32, 12.0).unwrap();
        let f = ComplexField::from_position_fn(Arc::clone(&lat), |[x, y, z]| {
            Complex64::new((-(x * x + y * y + z * z) / 2.0).exp(), x * y * 0.1)
        });
        let back = to_position(&to_momentum(&f).unwrap()).unwrap();
        assert!(f.distance(&back).unwrap() < 1e-12);
    }

    #[test]
    fn gaussian_is_self_dual_line1d() {
        let lat = line(256, 40.0);
        let f = ComplexField::from_position_fn(Arc::clone(&lat), |[x, _, _]| {
            Complex64::new((-x * x / 2.0).exp(), 0.0)
        });
        let g = to_momentum(&f).unwrap();
        for i in 0..lat.len() {
            let k = lat.momentum(i)[0];
            let expect = (-k * k / 2.0).exp();
            assert_abs_diff_eq!(g.values()[i].re, expect, epsilon = 1e-10);
            assert_abs_diff_eq!(g.values()[i].im, 0.0, epsilon = 1e-10);
        }
    }

    /// Transform of the minimally localized profile A e^(-gamma r):
    /// psi(k) = (2*pi)^(-3/2) * 8*pi*gamma / (k^2 + gamma^2)^2.
    #[test]
    fn radial_transform_matches_lorentzian_squared_closed_form() {
        let gamma = 1.0;
        let lat = Lattice::new(LatticeMode::Radial3d, 4096, 40.0 / gamma).unwrap();
        let f = ComplexField::from_position_fn(Arc::clone(&lat), |[r, _, _]| {
            Complex64::new((-gamma * r).exp(), 0.0)
        });
        let g = to_momentum(&f).unwrap();
        let norm3 = (2.0 * PI).powf(1.5);
        let mut worst = 0.0f64;
        for i in 0..lat.len() {
            let k = lat.momentum_radius(i);
            if k > 10.0 * gamma {
                break;
            }
            let expect = 8.0 * PI * gamma / (k * k + gamma * gamma).powi(2) / norm3;
            let rel = (g.values()[i].re - expect).abs() / expect;
            worst = worst.max(rel);
        }
        assert!(worst < 1e-6, "worst relative error {worst:.3e}");
        // spot value at the innermost site k0 = pi/L
        let k0 = lat.momentum_radius(0);
        let expect0 = 8.0 * PI * gamma / (k0 * k0 + 1.0).powi(2) / norm3;
        assert_abs_diff_eq!(g.values()[0].re, expect0, epsilon = 1e-6);
    }

    #[test]
    fn parseval_radial_and_line() {
        let lat = Lattice::new(LatticeMode::Radial3d, 512, 30.0).unwrap();
        let f = ComplexField::from_position_fn(Arc::clone(&lat), |[r, _, _]| {
            Complex64::new((-r).exp() * (3.0 * r).cos(), (-r * r / 4.0).exp())
        });
        let g = to_momentum(&f).unwrap();
        assert_abs_diff_eq!(f.norm_sq(), g.norm_sq(), epsilon = 1e-12 * f.norm_sq());
    }

    #[test]
    fn omega_values_at_special_points() {
        let m = 1.7;
        let params = PhysicalParams::new(m).unwrap();
        let lat = line(256, 32.0 * PI / m); // dk = m/16, fft ordering: k = 0 first
        let f = ComplexField::from_momentum_fn(Arc::clone(&lat), |_| Complex64::new(1.0, 0.0));
        let g = omega_apply(&f, OmegaPower::First, params).unwrap();
        // k = 0 site multiplies by m
        assert_abs_diff_eq!(g.values()[0].re, m, epsilon = 1e-14);
        // |k| = m sits 16 steps up
        let i = 16;
        assert_abs_diff_eq!(lat.momentum_radius(i), m, epsilon = 1e-12);
        assert_abs_diff_eq!(g.values()[i].re, 2.0_f64.sqrt() * m, epsilon = 1e-12);
    }

    #[test]
    fn omega_inverse_pair_is_identity() {
        let params = PhysicalParams::new(0.9).unwrap();
        let lat = line(128, 25.0);
        let f = ComplexField::from_momentum_fn(Arc::clone(&lat), |[k, _, _]| {
            Complex64::new((-k * k / 8.0).exp(), 0.3 * k.sin())
        });
        let g = omega_apply(
            &omega_apply(&f, OmegaPower::Inverse, params).unwrap(),
            OmegaPower::First,
            params,
        )
        .unwrap();
        assert!(f.distance(&g).unwrap() < 1e-14 * (1.0 + f.norm()));
    }

    #[test]
    fn omega_square_equals_first_twice() {
        let params = PhysicalParams::new(1.3).unwrap();
        let lat = Lattice::new(LatticeMode::Radial3d, 128, 20.0).unwrap();
        let f = ComplexField::from_momentum_fn(Arc::clone(&lat), |[k, _, _]| {
            Complex64::new((-k).exp(), 1.0 / (1.0 + k * k))
        });
        let a = omega_apply(&f, OmegaPower::Square, params).unwrap();
        let b = omega_apply(
            &omega_apply(&f, OmegaPower::First, params).unwrap(),
            OmegaPower::First,
            params,
        )
        .unwrap();
        assert!(a.distance(&b).unwrap() < 1e-13 * (1.0 + a.norm()));
    }

    #[test]
    fn omega_rejects_position_representation() {
        let params = PhysicalParams::new(1.0).unwrap();
        let lat = line(64, 10.0);
        let f = ComplexField::zeros(lat, Representation::Position);
        assert!(omega_apply(&f, OmegaPower::First, params).is_err());
    }

    #[test]
    fn spectral_gradient_matches_analytic_gaussian_line1d() {
        let lat = line(512, 30.0);
        let f = ComplexField::from_position_fn(Arc::clone(&lat), |[x, _, _]| {
            Complex64::new((-x * x / 2.0).exp(), 0.0)
        });
        let grad = gradient_apply(&to_momentum(&f).unwrap()).unwrap();
        let gx = to_position(&grad[0]).unwrap();
        for i in 0..lat.len() {
            let x = lat.position(i)[0];
            let expect = -x * (-x * x / 2.0).exp();
            assert_abs_diff_eq!(gx.values()[i].re, expect, epsilon = 1e-10);
        }
    }

    #[test]
    fn gradient_of_constant_is_zero() {
        let lat = Lattice::new(LatticeMode::Cartesian3d, 32, 10.0).unwrap();
        let f = ComplexField::from_position_fn(Arc::clone(&lat), |_| Complex64::new(1.0, 0.0));
        let grads = gradient_apply(&to_momentum(&f).unwrap()).unwrap();
        for g in grads {
            assert!(to_position(&g).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_scales_plane_wave_mode() {
        let lat = Lattice::new(LatticeMode::Cartesian3d, 32, 10.0).unwrap();
        // single-mode momentum field at some site
        let target = 3 * 32 * 32 + 5 * 32 + 7;
        let f = ComplexField::new(
            Arc::clone(&lat),
            Representation::Momentum,
            (0..lat.len())
                .map(|i| {
                    if i == target {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::ZERO
                    }
                })
                .collect(),
        );
        let grads = gradient_apply(&f).unwrap();
        let k0 = lat.momentum(target);
        for (axis, g) in grads.iter().enumerate() {
            let v = g.values()[target];
            assert_abs_diff_eq!(v.im, k0[axis], epsilon = 1e-14);
            assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn radial_gradient_matches_analytic() {
        let lat = Lattice::new(LatticeMode::Radial3d, 512, 30.0).unwrap();
        let f = ComplexField::from_position_fn(Arc::clone(&lat), |[r, _, _]| {
            Complex64::new((-r * r / 2.0).exp(), 0.0)
        });
        let grad = gradient_apply(&to_momentum(&f).unwrap()).unwrap();
        assert_eq!(grad[0].repr(), Representation::Position);
        for i in 0..lat.len() {
            let r = lat.radius(i);
            if r > 10.0 {
                break;
            }
            let expect = -r * (-r * r / 2.0).exp();
            assert_abs_diff_eq!(grad[0].values()[i].re, expect, epsilon = 1e-9);
        }
    }
}
