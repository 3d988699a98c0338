use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use fano_core::continuum::{continuum_report, GaussianState, QuadratureConfig};
use fano_core::transform::random_density_matrix;
use fano_core::{
    build_kernel, cohendet_sign, enumerate_kernels, state_of_wigner, verify_all, wigner_of_state,
    LatticeDim,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dim(n: usize) -> LatticeDim {
    LatticeDim::new(n).unwrap()
}

fn bench_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_kernel");
    for n in [3, 5, 7, 9] {
        let sign = cohendet_sign(dim(n)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &sign, |b, s| {
            b.iter(|| build_kernel(black_box(s)).unwrap())
        });
    }
    group.finish();
}

fn bench_verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_all");
    for n in [3, 5, 7] {
        let kernel = build_kernel(&cohendet_sign(dim(n)).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &kernel, |b, k| {
            b.iter(|| verify_all(black_box(k), 1e-12).unwrap())
        });
    }
    group.finish();
}

fn bench_enumerate(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    group.sample_size(10);
    group.bench_function("n4_certified", |b| {
        b.iter(|| enumerate_kernels(dim(4), true).unwrap().count)
    });
    group.bench_function("n6_signs", |b| {
        b.iter(|| enumerate_kernels(dim(6), false).unwrap().count)
    });
    group.finish();
}

fn bench_transform(c: &mut Criterion) {
    let mut group = c.benchmark_group("round_trip");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [3, 5, 7] {
        let kernel = build_kernel(&cohendet_sign(dim(n)).unwrap()).unwrap();
        let rho = random_density_matrix(dim(n), &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(n), &(kernel, rho), |b, (k, r)| {
            b.iter(|| state_of_wigner(k, &wigner_of_state(k, black_box(r)).unwrap()).unwrap())
        });
    }
    group.finish();
}

fn bench_continuum(c: &mut Criterion) {
    let mut group = c.benchmark_group("continuum");
    group.sample_size(10);
    let cfg = QuadratureConfig::default();
    let state = GaussianState::new(1.5, -0.7, 1.0).unwrap();
    group.bench_function("report_default_config", |b| {
        b.iter(|| continuum_report(black_box(&state), 1.0, -0.5, &cfg, 1e-6).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_build,
    bench_verify,
    bench_enumerate,
    bench_transform,
    bench_continuum
);
criterion_main!(benches);
