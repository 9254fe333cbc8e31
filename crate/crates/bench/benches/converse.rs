use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::Rng;

use shufflecap::converse::{check_bounds, cluster_set, oracle_entropies, ClusterMode};
use shufflecap::rng::seeded;
use shufflecap::{Pool, TinyInstance};

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for (m, l) in [(2, 5), (3, 4), (4, 3)] {
        let inst = TinyInstance::random(m, l, 0.05, 4, &mut seeded(5)).unwrap();
        group.bench_with_input(BenchmarkId::new("entropies", format!("{m}x{l}")), &inst, |b, inst| {
            b.iter(|| black_box(oracle_entropies(inst)))
        });
        group.bench_with_input(BenchmarkId::new("bounds", format!("{m}x{l}")), &inst, |b, inst| {
            b.iter(|| black_box(check_bounds(inst, 0.34, 0.17).unwrap()))
        });
    }
    group.finish();
}

fn clustering(c: &mut Criterion) {
    let mut group = c.benchmark_group("cluster_set");
    let mut rng = seeded(6);
    for m in [12usize, 24] {
        let data = (0..m * 16).map(|_| rng.random_range(0..2u8)).collect();
        let pool = Pool::from_flat(data, 16, 2).unwrap();
        group.bench_with_input(BenchmarkId::new("exact", m), &pool, |b, pool| {
            b.iter(|| black_box(cluster_set(pool, 0.4, ClusterMode::Exact).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("greedy", m), &pool, |b, pool| {
            b.iter(|| black_box(cluster_set(pool, 0.4, ClusterMode::Greedy).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, oracle, clustering);
criterion_main!(benches);
