use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use quadsure_core::coeffspace::{regular_polygon, PolygonSpec};
use quadsure_core::entropy::rotate_quadrature;
use quadsure_core::moments::{product_check, sum_check};
use quadsure_core::states::{gaussian_grid, ground_state, Grid};
use quadsure_core::transforms::standard_form;
use quadsure_core::{hermite_superposition, incompatibility, maximize_incompatibility};

fn bench_incompatibility(c: &mut Criterion) {
    let small = regular_polygon(&PolygonSpec::canonical(8).unwrap());
    let large = regular_polygon(&PolygonSpec::canonical(64).unwrap());
    c.bench_function("incompatibility/n8", |b| {
        b.iter(|| incompatibility(black_box(&small)))
    });
    c.bench_function("incompatibility/n64", |b| {
        b.iter(|| incompatibility(black_box(&large)))
    });
}

fn bench_standard_form(c: &mut Criterion) {
    let pair = regular_polygon(&PolygonSpec::canonical(10).unwrap());
    c.bench_function("standard_form/n10", |b| {
        b.iter(|| standard_form(black_box(&pair)).unwrap())
    });
}

fn bench_bound_checks(c: &mut Criterion) {
    let state = ground_state(1.0).unwrap();
    let pair = regular_polygon(&PolygonSpec::new(6, 1.0).unwrap());
    c.bench_function("sum_and_product_check/n6", |b| {
        b.iter(|| {
            let s = sum_check(black_box(&state), black_box(&pair), 1e-9);
            let p = product_check(black_box(&state), black_box(&pair), 1e-9);
            (s.satisfied, p.satisfied)
        })
    });
}

fn bench_rotate_quadrature(c: &mut Criterion) {
    let grid = Grid::default_for(1.0).unwrap();
    let ground = gaussian_grid(&ground_state(1.0).unwrap(), &grid).unwrap();
    let coeffs: Vec<Complex64> = (0..6)
        .map(|n| Complex64::new(1.0 / (n as f64 + 1.0), 0.2))
        .collect();
    let superposition = hermite_superposition(&coeffs, &grid, 1.0).unwrap();
    c.bench_function("rotate_quadrature/gaussian_m2048", |b| {
        b.iter(|| rotate_quadrature(black_box(&ground), black_box(0.7)).unwrap())
    });
    c.bench_function("rotate_quadrature/hermite6_m2048", |b| {
        b.iter(|| rotate_quadrature(black_box(&superposition), black_box(2.1)).unwrap())
    });
}

fn bench_maximize(c: &mut Criterion) {
    c.bench_function("maximize_incompatibility/n5_r8", |b| {
        b.iter(|| maximize_incompatibility(black_box(5), 7, 8).unwrap())
    });
}

criterion_group!(
    benches,
    bench_incompatibility,
    bench_standard_form,
    bench_bound_checks,
    bench_rotate_quadrature,
    bench_maximize
);
criterion_main!(benches);
