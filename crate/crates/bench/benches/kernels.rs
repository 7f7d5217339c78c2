use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use sphere_spectra_bench::{clifford, clifford_pair};
use sphere_spectra_core::quadrature::{integrate, QuadratureOptions};
use sphere_spectra_core::{
    assemble_laplacian, discrete_shape_operator, offset_mesh, self_intersection_test, smallest_nonzero_eig,
    tube_integral, OffsetDistance,
};

fn quadrature(c: &mut Criterion) {
    c.bench_function("tube_integral n=4", |b| b.iter(|| tube_integral(4, black_box(1.7)).unwrap()));
    c.bench_function("integrate sin^3 cos^2", |b| {
        b.iter(|| {
            let f = |x: f64| x.sin().powi(3) * x.cos().powi(2);
            integrate(f, 0.0, black_box(2.5), QuadratureOptions::with_tol(1e-12)).unwrap()
        })
    });
}

fn assembly(c: &mut Criterion) {
    let mut g = c.benchmark_group("assembly");
    for res in [32, 64, 128] {
        let mesh = clifford(res);
        g.bench_with_input(BenchmarkId::new("laplacian", res), &mesh, |b, m| {
            b.iter(|| assemble_laplacian(m).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("shape_operator", res), &mesh, |b, m| {
            b.iter(|| discrete_shape_operator(m).unwrap())
        });
    }
    g.finish();
}

fn eigensolve(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigensolve");
    g.sample_size(10);
    for res in [32, 64] {
        let (_, pair) = clifford_pair(res);
        g.bench_with_input(BenchmarkId::from_parameter(res), &pair, |b, p| {
            b.iter(|| smallest_nonzero_eig(p, 1e-8, 500).unwrap())
        });
    }
    g.finish();
}

fn intersection(c: &mut Criterion) {
    let mut g = c.benchmark_group("self_intersection");
    g.sample_size(10);
    for res in [32, 64] {
        let moved = offset_mesh(&clifford(res), OffsetDistance(0.3)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(res), &moved, |b, m| {
            b.iter(|| self_intersection_test(m).unwrap())
        });
    }
    g.finish();
}

criterion_group!(kernels, quadrature, assembly, eigensolve, intersection);
criterion_main!(kernels);
