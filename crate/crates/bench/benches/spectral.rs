use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use wavetail::analysis::{fit_tail, SlopeKind};
use wavetail::dirac::{radial_bump_density, ProjectorKernel};
use wavetail::num_complex::Complex64;
use wavetail::spectral::{to_momentum, to_position};
use wavetail::{ComplexField, Lattice, LatticeMode, PhysicalParams};

fn transform_round_trip(c: &mut Criterion) {
    let mut group = c.benchmark_group("transform_round_trip");
    let cases = [
        ("line1d_4096", LatticeMode::Line1d, 4096, 32.0),
        ("radial3d_4096", LatticeMode::Radial3d, 4096, 32.0),
        ("cartesian3d_64", LatticeMode::Cartesian3d, 64, 16.0),
    ];
    for (name, mode, points, l) in cases {
        let lat = Lattice::new(mode, points, l).unwrap();
        let f = ComplexField::from_position_fn(Arc::clone(&lat), |[r, _, _]| {
            Complex64::new((-r * r / 4.0).exp(), (2.0 * r).sin())
        });
        group.bench_function(name, |b| {
            b.iter(|| to_position(&to_momentum(&f).unwrap()).unwrap())
        });
    }
    group.finish();
}

fn projector_build(c: &mut Criterion) {
    let params = PhysicalParams::new(1.0).unwrap();
    let lat = Lattice::new(LatticeMode::Cartesian3d, 32, 16.0).unwrap();
    let kernel = ProjectorKernel::build(Arc::clone(&lat), params);
    c.bench_function("projector_matrices_32cubed", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 0..lat.len() {
                acc += kernel.matrix(i)[0][0].re;
            }
            acc
        })
    });
}

fn tail_fit(c: &mut Criterion) {
    let params = PhysicalParams::new(1.0).unwrap();
    let lat = Lattice::new(LatticeMode::Radial3d, 4096, 32.0).unwrap();
    let prof = radial_bump_density(&lat, params, 1.0, 0.0).unwrap();
    c.bench_function("dirac_radial_density_4096", |b| {
        b.iter(|| radial_bump_density(&lat, params, 1.0, 0.0).unwrap())
    });
    c.bench_function("tail_fit_4096", |b| {
        b.iter(|| fit_tail(&prof, (6.0, 12.0), SlopeKind::R2Corrected).unwrap())
    });
}

criterion_group!(benches, transform_round_trip, projector_build, tail_fit);
criterion_main!(benches);
