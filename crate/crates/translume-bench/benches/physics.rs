//! Benchmarks for the hot paths: the dense transmission-ladder exponential,
//! the matrix-free single-row solve that dense frequency grids rely on, the
//! analytic spectral-amplitude quadrature, and characteristic tracing.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use translume_core::{
    spectral_amplitude, trace_ray, transmission_ladder, transmission_row, GratingConfig,
    PulseModel, Truncation,
};

const PERIOD: f64 = 2.0 * std::f64::consts::PI;

fn resonant(d: f64) -> GratingConfig {
    GratingConfig::new(1.0, 0.05, 1.0, 1.0, d, 1.0).unwrap()
}

fn bench_dense_ladder(c: &mut Criterion) {
    let cfg = resonant(5.0 * PERIOD);
    let mut group = c.benchmark_group("dense_ladder");
    for n_max in [64usize, 128] {
        group.bench_function(format!("n_max_{n_max}"), |b| {
            b.iter(|| {
                transmission_ladder(black_box(&cfg), black_box(0.45), Truncation::Fixed(n_max))
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn bench_row_solve(c: &mut Criterion) {
    let cfg = resonant(5.0 * PERIOD);
    let mut group = c.benchmark_group("row_solve");
    for n_max in [256usize, 1024] {
        group.bench_function(format!("n_max_{n_max}"), |b| {
            b.iter(|| {
                transmission_row(
                    black_box(&cfg),
                    black_box(0.45),
                    black_box(2),
                    Truncation::Fixed(n_max),
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn bench_spectral_amplitude(c: &mut Criterion) {
    let model = PulseModel::new(resonant(20.0)).unwrap();
    c.bench_function("spectral_amplitude", |b| {
        b.iter(|| {
            spectral_amplitude(black_box(&model), black_box(0.75), black_box(1), black_box(-5))
                .unwrap()
        })
    });
}

fn bench_ray_trace(c: &mut Criterion) {
    let cfg = resonant(5.0 * PERIOD);
    c.bench_function("trace_ray_5_periods", |b| {
        b.iter(|| {
            trace_ray(
                black_box(&cfg),
                black_box(1.0),
                black_box(0.0),
                black_box(5.0 * PERIOD),
                None,
                None,
            )
            .unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_dense_ladder,
    bench_row_solve,
    bench_spectral_amplitude,
    bench_ray_trace
);
criterion_main!(benches);
