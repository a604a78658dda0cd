use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gsc_core::graph::{fold, LabeledGraph};
use gsc_core::random_lab::{BaseSpec, Experiment, ExperimentConfig};
use gsc_core::small_cancellation::check_gr_product;
use gsc_core::word::walk_distance_distribution;
use gsc_core::{check_gr, find_missing_word, Alpha, Variant};

fn alpha(s: &str) -> Alpha {
    s.parse().unwrap()
}

fn experiment(length: usize, j: usize) -> Experiment {
    Experiment::new(ExperimentConfig {
        base: BaseSpec::Cycle { length },
        j,
        m: 2,
        alpha: alpha("1/12"),
        alpha_prime: alpha("1/24"),
        beta: 0.05,
        trials: 1,
        seed: 1,
        qi_exhaustive_limit: 1_000,
        qi_samples: 10,
    })
    .unwrap()
}

fn folded(length: usize, j: usize) -> LabeledGraph {
    fold(&experiment(length, j).labelling(0)).graph.core()
}

fn bench_fold(c: &mut Criterion) {
    let mut group = c.benchmark_group("fold");
    for edges in [1_000, 10_000, 100_000] {
        let g = experiment(edges / 50, 50).labelling(0);
        group.bench_with_input(BenchmarkId::from_parameter(edges), &g, |b, g| b.iter(|| fold(black_box(g))));
    }
    group.finish();
}

fn bench_check_gr(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_gr");
    group.sample_size(10);
    let a = alpha("1/12");
    for (length, j) in [(8, 20), (12, 40)] {
        let g = folded(length, j);
        let id = g.edge_count();
        group.bench_with_input(BenchmarkId::new("hash", id), &g, |b, g| {
            b.iter(|| check_gr(black_box(g), a, Variant::Girth).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("product", id), &g, |b, g| {
            b.iter(|| check_gr_product(black_box(g), a, Variant::Girth).unwrap())
        });
    }
    group.finish();
}

fn bench_missing_word(c: &mut Criterion) {
    let g = folded(12, 40);
    c.bench_function("find_missing_word/8", |b| b.iter(|| find_missing_word(black_box(&g), 8)));
}

fn bench_walk_distance(c: &mut Criterion) {
    let mut group = c.benchmark_group("walk_distance_distribution");
    for len in [16, 64, 256] {
        group.bench_with_input(BenchmarkId::from_parameter(len), &len, |b, &len| {
            b.iter(|| walk_distance_distribution(2, black_box(len)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_fold, bench_check_gr, bench_missing_word, bench_walk_distance);
criterion_main!(benches);
