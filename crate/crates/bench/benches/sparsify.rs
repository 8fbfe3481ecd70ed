use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use netsparse::graph::generate_random_connected;
use netsparse::metrics::{clustering_coefficients, pagerank};
use netsparse::multilevel::Preset;
use netsparse::sparsify::{sparsify_binned, sparsify_single};
use netsparse::{compute_algdist, AlgDistParams, Hierarchy, LevelConfig, Mode, MultilevelParams, SparsifyPlan};
use std::hint::black_box;

const SIZES: [usize; 3] = [10_000, 50_000, 200_000];

fn algdist(c: &mut Criterion) {
    let mut group = c.benchmark_group("algdist");
    group.sample_size(10);
    for m in SIZES {
        let g = generate_random_connected(m / 5, m, 1).unwrap();
        group.throughput(Throughput::Elements(m as u64));
        group.bench_with_input(BenchmarkId::from_parameter(m), &g, |b, g| {
            b.iter(|| compute_algdist(black_box(g), &AlgDistParams::default()).unwrap())
        });
    }
    group.finish();
}

fn filtering(c: &mut Criterion) {
    let g = generate_random_connected(20_000, 100_000, 2).unwrap();
    let scores = compute_algdist(&g, &AlgDistParams::default()).unwrap();
    let mut group = c.benchmark_group("filter");
    group.sample_size(20);
    group.bench_function("keep-strong", |b| {
        b.iter(|| sparsify_single(&g, &scores, &SparsifyPlan::new(0.5, Mode::KeepStrong)).unwrap())
    });
    group.bench_function("mixture", |b| {
        b.iter(|| sparsify_binned(&g, &scores, &SparsifyPlan::new(0.5, Mode::Mixture)).unwrap())
    });
    group.finish();
}

fn multilevel(c: &mut Criterion) {
    let g = generate_random_connected(10_000, 50_000, 3).unwrap();
    let params = MultilevelParams::default();
    let mut group = c.benchmark_group("multilevel");
    group.sample_size(10);
    group.bench_function("hierarchy", |b| {
        b.iter(|| Hierarchy::build(&g, &params.algdist, &params.coarsening).unwrap())
    });
    let h = Hierarchy::build(&g, &params.algdist, &params.coarsening).unwrap();
    let cfg = LevelConfig::preset(h.depth(), Preset::Finest, 3, 0.5).unwrap();
    group.bench_function("v-cycle", |b| {
        b.iter(|| netsparse::multilevel::ml_sparsify_on(&h, &cfg, &params).unwrap())
    });
    group.finish();
}

fn metrics(c: &mut Criterion) {
    let g = generate_random_connected(20_000, 100_000, 4).unwrap();
    let mut group = c.benchmark_group("metrics");
    group.sample_size(10);
    group.bench_function("pagerank", |b| b.iter(|| pagerank(&g, 0.85, 1e-10)));
    group.bench_function("clustering", |b| b.iter(|| clustering_coefficients(&g)));
    group.finish();
}

criterion_group!(benches, algdist, filtering, multilevel, metrics);
criterion_main!(benches);
