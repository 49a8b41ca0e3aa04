use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use graph_sobolev::approximation::{f_series_error, g_series_error};
use graph_sobolev::generators::{graph_of_kind, random_scalar, trial_rng, GraphKind, GraphSampler};
use graph_sobolev::inequalities::{run_suite, CheckKind, SuiteConfig};
use graph_sobolev::{laplacian, nabla_sequence, p_laplacian, sobolev_norm, SobolevNorm};

fn operators(c: &mut Criterion) {
    let mut group = c.benchmark_group("operators");
    for n in [1_000usize, 10_000, 100_000] {
        let mut rng = trial_rng(1, n as u64);
        let g = graph_of_kind(&mut rng, GraphKind::Sparse, n, &GraphSampler::default());
        let u = random_scalar(&mut rng, &g);
        group.bench_with_input(BenchmarkId::new("laplacian", n), &u, |b, u| {
            b.iter(|| laplacian(black_box(u)))
        });
        group.bench_with_input(BenchmarkId::new("p_laplacian_3", n), &u, |b, u| {
            b.iter(|| p_laplacian(black_box(u), 3.0).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("nabla_sequence_3", n), &u, |b, u| {
            b.iter(|| nabla_sequence(black_box(u), 3))
        });
        let spec = SobolevNorm::sum(3, 2.0).unwrap();
        group.bench_with_input(BenchmarkId::new("w32_norm", n), &u, |b, u| {
            b.iter(|| sobolev_norm(black_box(u), &spec).unwrap())
        });
    }
    group.finish();
}

fn experiments(c: &mut Criterion) {
    let mut group = c.benchmark_group("half_line");
    for k in [256usize, 4096] {
        group.bench_with_input(BenchmarkId::new("f_error", k), &k, |b, &k| {
            b.iter(|| f_series_error(black_box(k)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("g_error", k), &k, |b, &k| {
            b.iter(|| g_series_error(black_box(k)).unwrap())
        });
    }
    group.finish();
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for check in [
        CheckKind::Holder,
        CheckKind::EmbeddingLq,
        CheckKind::PathBound,
    ] {
        let cfg = SuiteConfig {
            trials: 200,
            checks: vec![check],
            ..SuiteConfig::default()
        };
        group.bench_function(format!("{check:?}"), |b| {
            b.iter(|| run_suite(&cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, operators, experiments, suites);
criterion_main!(benches);
