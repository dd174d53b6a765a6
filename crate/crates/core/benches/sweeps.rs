use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dtzero::exec::Execution;
use dtzero::macmahon;
use dtzero::suites;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn plane_partitions(c: &mut Criterion) {
    let mut group = c.benchmark_group("plane_partition_count");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 18), &18usize, |b, &n| {
            b.iter(|| macmahon::count_plane_partitions_with(n, n, exec).unwrap())
        });
    }
    group.finish();
}

fn fibre_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("fibre_identity_sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 5), &5usize, |b, &n| {
            b.iter(|| suites::fiber_identity_sweep(n, exec).unwrap())
        });
    }
    group.finish();
}

fn exponent_identity(c: &mut Criterion) {
    let triples = suites::random_chern_triples(1000, 7);
    let mut group = c.benchmark_group("exponent_identity_1000");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| suites::exponent_identity_sweep(&triples, exec).unwrap())
        });
    }
    group.finish();
}

fn q_sets(c: &mut Criterion) {
    let mut group = c.benchmark_group("q_set_sweep_500");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| suites::q_set_sweep(4, 500, 11, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    plane_partitions,
    fibre_sweep,
    exponent_identity,
    q_sets
);
criterion_main!(benches);
