use std::hint::black_box;

use ave_bench::toeplitz;
use ave_core::conditions::{check_t12, check_t32};
use ave_core::linalg::{spectral_norm, spectral_radius};
use ave_core::EMatrixSpec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn condition_checks(c: &mut Criterion) {
    let mut group = c.benchmark_group("conditions");
    group.sample_size(10);
    for n in [50, 200, 500] {
        let a = toeplitz(n);
        group.bench_with_input(BenchmarkId::new("t12", n), &a, |b, a| {
            b.iter(|| check_t12(black_box(a), 0.9, &EMatrixSpec::InvDiagA).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("t32", n), &a, |b, a| {
            b.iter(|| check_t32(black_box(a), 0.9, &EMatrixSpec::InvDiagA).unwrap())
        });
    }
    group.finish();
}

fn kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernels");
    group.sample_size(10);
    for n in [100, 400] {
        let a = toeplitz(n);
        group.bench_with_input(BenchmarkId::new("spectral_radius", n), &a, |b, a| {
            b.iter(|| spectral_radius(black_box(a)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("spectral_norm", n), &a, |b, a| {
            b.iter(|| spectral_norm(black_box(a)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, condition_checks, kernels);
criterion_main!(benches);
